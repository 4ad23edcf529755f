#pragma once

#include "arith.hpp"
#include "diagram.hpp"
#include "dynamics.hpp"
#include "json_io.hpp"
#include "ktheory.hpp"
#include "order.hpp"
#include "realize.hpp"
#include "report.hpp"
#include "transgraph.hpp"
#include "vershik.hpp"
