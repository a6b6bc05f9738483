#pragma once

#include "varent/error.hpp"
#include "varent/quadrature.hpp"
#include "varent/random.hpp"
#include "varent/distributions.hpp"
#include "varent/fitting.hpp"
#include "varent/measures.hpp"
#include "varent/closed_forms.hpp"
#include "varent/transforms.hpp"
#include "varent/coherent.hpp"
#include "varent/bounds.hpp"
#include "varent/estimation.hpp"
#include "varent/experiments.hpp"
