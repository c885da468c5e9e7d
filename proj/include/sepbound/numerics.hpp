#pragma once

#include "sepbound/numerics/logexp.hpp"
#include "sepbound/numerics/parallel.hpp"
#include "sepbound/numerics/quadrature.hpp"
#include "sepbound/numerics/random.hpp"
#include "sepbound/numerics/special.hpp"
