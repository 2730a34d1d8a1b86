#pragma once

#include "zolab/error.hpp"
#include "zolab/dyadic.hpp"
#include "zolab/rng.hpp"
#include "zolab/int_rule.hpp"
#include "zolab/lambda.hpp"
#include "zolab/block_rules.hpp"
#include "zolab/catalog.hpp"
#include "zolab/classify.hpp"
#include "zolab/witness.hpp"
#include "zolab/series.hpp"
#include "zolab/kronecker.hpp"
#include "zolab/spec_json.hpp"
#include "zolab/csv.hpp"
#include "zolab/cli.hpp"
