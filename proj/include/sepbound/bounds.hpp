#pragma once

#include "sepbound/bounds/accuracy.hpp"
#include "sepbound/bounds/ccdf.hpp"
#include "sepbound/bounds/kernels.hpp"
#include "sepbound/bounds/loss_model.hpp"
#include "sepbound/bounds/separation.hpp"
#include "sepbound/bounds/sweeps.hpp"
