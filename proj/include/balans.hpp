#pragma once

#include "balans/words.hpp"
#include "balans/substitution.hpp"
#include "balans/polynomial.hpp"
#include "balans/linalg.hpp"
#include "balans/parallel.hpp"
#include "balans/frequency.hpp"
#include "balans/balance.hpp"
#include "balans/certificate.hpp"
#include "balans/dendric.hpp"
#include "balans/analysis.hpp"
#include "balans/json_io.hpp"
