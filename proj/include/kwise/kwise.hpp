#pragma once

#include "kwise/bounds.hpp"
#include "kwise/certificate.hpp"
#include "kwise/constructions.hpp"
#include "kwise/errors.hpp"
#include "kwise/extremal_lp.hpp"
#include "kwise/independence.hpp"
#include "kwise/interval.hpp"
#include "kwise/json.hpp"
#include "kwise/moments.hpp"
#include "kwise/rational.hpp"
#include "kwise/sample_space.hpp"
#include "kwise/sampler.hpp"
#include "kwise/simplex.hpp"
