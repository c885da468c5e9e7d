#pragma once

#include "sepbound/bounds.hpp"
#include "sepbound/empirical.hpp"
#include "sepbound/errors.hpp"
#include "sepbound/numerics.hpp"
#include "sepbound/oracle.hpp"
#include "sepbound/synth.hpp"
#include "sepbound/table.hpp"
