#pragma once

#include "mmt/metrics/amfm.hpp"
#include "mmt/metrics/bleu.hpp"
#include "mmt/metrics/degradation.hpp"
#include "mmt/metrics/ribes.hpp"
