#pragma once

#include "hcm/bounds.hpp"
#include "hcm/errors.hpp"
#include "hcm/experiment.hpp"
#include "hcm/fractional.hpp"
#include "hcm/fugacity.hpp"
#include "hcm/generators.hpp"
#include "hcm/graph.hpp"
#include "hcm/hardcore_exact.hpp"
#include "hcm/io.hpp"
#include "hcm/lambert_w.hpp"
#include "hcm/rational.hpp"
#include "hcm/sampler.hpp"
#include "hcm/simplex.hpp"
