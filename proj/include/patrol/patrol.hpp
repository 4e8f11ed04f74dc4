#pragma once

#include "patrol/error.hpp"
#include "patrol/gaps.hpp"
#include "patrol/generate.hpp"
#include "patrol/model.hpp"
#include "patrol/rational.hpp"
#include "patrol/report_io.hpp"
#include "patrol/schedule_io.hpp"
#include "patrol/svg.hpp"
#include "patrol/verify.hpp"
