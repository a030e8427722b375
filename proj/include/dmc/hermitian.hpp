#pragma once

#include "dmc/cyclotomic.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace dmc
{

using Mat = std::vector<std::vector<CycElem>>;

struct ConductorMismatch : std::invalid_argument
{
    ConductorMismatch() : std::invalid_argument("forms live over different cyclotomic fields or have different sizes") {}
};

inline Mat zero_matrix(std::size_t m, int c)
{
    return Mat(m, std::vector<CycElem>(m, CycElem::rational(0, c)));
}

inline Mat identity_matrix(std::size_t m, int c)
{
    Mat r = zero_matrix(m, c);
    for (std::size_t i = 0; i < m; ++i) r[i][i] = CycElem::rational(1, c);
    return r;
}

inline Mat mat_mul(const Mat& a, const Mat& b)
{
    std::size_t n = a.size(), k = b.size(), m = k ? b[0].size() : 0;
    int c = n && k ? std::lcm(a[0][0].conductor(), b[0][0].conductor()) : 1;
    Mat r(n, std::vector<CycElem>(m, CycElem::rational(0, c)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < k; ++l) {
            if (a[i][l].is_zero()) continue;
            for (std::size_t j = 0; j < m; ++j)
                if (!b[l][j].is_zero()) r[i][j] += a[i][l] * b[l][j];
        }
    return r;
}

inline Mat conj_transpose(const Mat& a)
{
    std::size_t n = a.size(), m = n ? a[0].size() : 0;
    Mat r(m, std::vector<CycElem>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) r[j][i] = a[i][j].conj();
    return r;
}

inline Mat scale(const CycElem& s, const Mat& a)
{
    Mat r = a;
    for (auto& row : r)
        for (auto& x : row) x = s * x;
    return r;
}

inline bool mat_equal(const Mat& a, const Mat& b)
{
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != b[i].size()) return false;
        for (std::size_t j = 0; j < a[i].size(); ++j)
            if (a[i][j] != b[i][j]) return false;
    }
    return true;
}

inline Mat block_diag(const Mat& a, const Mat& b, int c)
{
    std::size_t n = a.size(), m = b.size();
    Mat r = zero_matrix(n + m, c);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) r[i][j] = a[i][j].lift(std::lcm(c, a[i][j].conductor()));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) r[n + i][n + j] = b[i][j].lift(std::lcm(c, b[i][j].conductor()));
    return r;
}

// d is the root-of-unity order defining the multiplier; entries live in Q(zeta_d)
struct SkewHermitianMatrix
{
    int d = 3;
    Mat a;
    std::size_t size() const { return a.size(); }
    int conductor() const { return canonical_conductor(d); }
};

struct HermitianMatrix
{
    int d = 3;
    Mat a;
    std::size_t size() const { return a.size(); }
    int conductor() const { return canonical_conductor(d); }
};

inline bool is_skew_hermitian(const Mat& a)
{
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i; j < a.size(); ++j)
            if (a[j][i] != -a[i][j].conj()) return false;
    return true;
}

inline bool is_hermitian(const Mat& a)
{
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i; j < a.size(); ++j)
            if (a[j][i] != a[i][j].conj()) return false;
    return true;
}

inline CycElem hermitian_multiplier(int d)
{
    return cyc(d, 1) - cyc(d, -1);
}

inline HermitianMatrix scale_to_hermitian(const SkewHermitianMatrix& S)
{
    return HermitianMatrix{S.d, scale(hermitian_multiplier(S.d), S.a)};
}

struct Diagonalization
{
    std::vector<CycElem> diag;
    Mat basis;  // columns are the new basis vectors
};

// basis^* H basis = diag(diag)
inline Diagonalization diagonalize_congruent(const HermitianMatrix& H)
{
    const std::size_t m = H.size();
    const int c = H.conductor();
    Mat A = H.a;
    for (auto& row : A)
        for (auto& x : row) x = x.lift(c);
    Mat P = identity_matrix(m, c);

    auto swap_index = [&](std::size_t i, std::size_t j) {
        if (i == j) return;
        std::swap(A[i], A[j]);
        for (auto& row : A) std::swap(row[i], row[j]);
        for (auto& row : P) std::swap(row[i], row[j]);
    };
    // e_i <- e_i + f e_j
    auto add_multiple = [&](std::size_t i, std::size_t j, const CycElem& f) {
        CycElem fb = f.conj();
        for (std::size_t r = 0; r < m; ++r) A[r][i] += A[r][j] * f;
        for (std::size_t r = 0; r < m; ++r) A[i][r] += fb * A[j][r];
        for (std::size_t r = 0; r < m; ++r) P[r][i] += P[r][j] * f;
    };

    for (std::size_t s = 0; s < m; ++s) {
        std::size_t piv = m;
        for (std::size_t r = s; r < m; ++r)
            if (!A[r][r].is_zero()) {
                piv = r;
                break;
            }
        if (piv == m) {
            std::size_t bi = m, bj = m;
            for (std::size_t i = s; i < m && bi == m; ++i)
                for (std::size_t j = s; j < m; ++j)
                    if (i != j && !A[i][j].is_zero()) {
                        bi = i;
                        bj = j;
                        break;
                    }
            if (bi == m) break;
            for (const CycElem& f : {CycElem::rational(1, c), CycElem::root(c, 1)}) {
                CycElem t = A[bi][bj] * f;
                if (!(t + t.conj()).is_zero()) {
                    add_multiple(bi, bj, f);
                    break;
                }
            }
            piv = bi;
        }
        swap_index(s, piv);
        CycElem inv = A[s][s].inverse();
        for (std::size_t r = s + 1; r < m; ++r) {
            if (A[s][r].is_zero()) continue;
            add_multiple(r, s, -(inv * A[s][r]));
        }
    }
    Diagonalization D;
    D.basis = std::move(P);
    for (std::size_t i = 0; i < m; ++i) D.diag.push_back(A[i][i]);
    return D;
}

struct Signature
{
    int pos = 0;
    int neg = 0;
    int null = 0;

    Signature flipped() const { return {neg, pos, null}; }
    bool definite() const { return null == 0 && (pos == 0 || neg == 0); }
    friend bool operator==(const Signature&, const Signature&) = default;
    std::string to_string() const
    {
        return "(" + std::to_string(pos) + "," + std::to_string(neg) + "," + std::to_string(null) + ")";
    }
};

inline Signature signature_of_diag(const std::vector<CycElem>& diag, long k)
{
    Signature s;
    for (const auto& x : diag) {
        switch (certified_sign(x, k)) {
        case Sign::Positive: ++s.pos; break;
        case Sign::Negative: ++s.neg; break;
        default: ++s.null; break;
        }
    }
    return s;
}

inline Signature signature(const HermitianMatrix& H, long k)
{
    return signature_of_diag(diagonalize_congruent(H).diag, k);
}

struct SignatureSpectrum
{
    int conductor = 1;
    std::map<int, Signature> at;

    friend bool operator==(const SignatureSpectrum&, const SignatureSpectrum&) = default;

    // equal up to an independent sign flip at every embedding
    bool matches_up_to_sign(const SignatureSpectrum& o) const
    {
        if (conductor != o.conductor || at.size() != o.at.size()) return false;
        for (const auto& [k, s] : at) {
            auto it = o.at.find(k);
            if (it == o.at.end()) return false;
            if (!(s == it->second || s == it->second.flipped())) return false;
        }
        return true;
    }

    std::string to_string() const
    {
        std::string r = "{";
        bool first = true;
        for (const auto& [k, s] : at) {
            r += (first ? "" : ", ") + std::to_string(k) + ": " + s.to_string();
            first = false;
        }
        return r + "}";
    }
};

inline SignatureSpectrum signature_spectrum(const HermitianMatrix& H)
{
    SignatureSpectrum sp;
    sp.conductor = H.conductor();
    auto D = diagonalize_congruent(H);
    for (int k : embedding_representatives(sp.conductor)) sp.at[k] = signature_of_diag(D.diag, k);
    return sp;
}

inline CycElem determinant(const Mat& M)
{
    const std::size_t m = M.size();
    int c = 1;
    for (const auto& row : M)
        for (const auto& x : row) c = std::lcm(c, x.conductor());
    Mat A = M;
    for (auto& row : A)
        for (auto& x : row) x = x.lift(c);
    CycElem det = CycElem::rational(1, c);
    for (std::size_t s = 0; s < m; ++s) {
        std::size_t piv = s;
        while (piv < m && A[piv][s].is_zero()) ++piv;
        if (piv == m) return CycElem::rational(0, c);
        if (piv != s) {
            std::swap(A[piv], A[s]);
            det = -det;
        }
        det *= A[s][s];
        CycElem inv = A[s][s].inverse();
        for (std::size_t r = s + 1; r < m; ++r) {
            if (A[r][s].is_zero()) continue;
            CycElem f = A[r][s] * inv;
            for (std::size_t j = s; j < m; ++j) A[r][j] -= f * A[s][j];
        }
    }
    return det;
}

inline CycElem determinant(const HermitianMatrix& H) { return determinant(H.a); }

inline int rank(const Mat& M)
{
    if (M.empty()) return 0;
    Mat A = M;
    std::size_t rows = A.size(), cols = A[0].size(), r = 0;
    for (std::size_t col = 0; col < cols && r < rows; ++col) {
        std::size_t piv = r;
        while (piv < rows && A[piv][col].is_zero()) ++piv;
        if (piv == rows) continue;
        std::swap(A[piv], A[r]);
        CycElem inv = A[r][col].inverse();
        for (std::size_t i = r + 1; i < rows; ++i) {
            if (A[i][col].is_zero()) continue;
            CycElem f = A[i][col] * inv;
            for (std::size_t j = col; j < cols; ++j) A[i][j] -= f * A[r][j];
        }
        ++r;
    }
    return static_cast<int>(r);
}

}  // namespace dmc
