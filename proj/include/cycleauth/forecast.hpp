#pragma once

#include "cycleauth/forecast/events.hpp"
#include "cycleauth/forecast/model.hpp"
#include "cycleauth/forecast/period.hpp"
#include "cycleauth/forecast/seasonality.hpp"
#include "cycleauth/forecast/serialize.hpp"
#include "cycleauth/forecast/timeseries.hpp"
#include "cycleauth/forecast/trend.hpp"
