#pragma once

#include "sepbound/empirical/dataset.hpp"
#include "sepbound/empirical/kappa.hpp"
#include "sepbound/empirical/separability.hpp"
#include "sepbound/empirical/statistics.hpp"
