#pragma once

#include "hdc/classify.hpp"
#include "hdc/config.hpp"
#include "hdc/dataset.hpp"
#include "hdc/errors.hpp"
#include "hdc/format.hpp"
#include "hdc/harness.hpp"
#include "hdc/model.hpp"
#include "hdc/report.hpp"
#include "hdc/rng.hpp"
#include "hdc/theory.hpp"
