#pragma once

#include "pipeadc/bias.hpp"
#include "pipeadc/correction.hpp"
#include "pipeadc/error.hpp"
#include "pipeadc/fft.hpp"
#include "pipeadc/metrics.hpp"
#include "pipeadc/pipeline.hpp"
#include "pipeadc/signals.hpp"
#include "pipeadc/harness/calibrate.hpp"
#include "pipeadc/harness/config_io.hpp"
#include "pipeadc/harness/emit.hpp"
#include "pipeadc/harness/profiles.hpp"
#include "pipeadc/harness/run.hpp"
