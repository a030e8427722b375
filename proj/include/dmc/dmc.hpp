#pragma once

#include "dmc/cyclotomic.hpp"
#include "dmc/hermitian.hpp"
#include "dmc/dmtheory.hpp"
#include "dmc/invariants.hpp"
#include "dmc/cusps.hpp"
#include "dmc/classifier.hpp"
