#pragma once

#include "qfield/core_algebra.hpp"
#include "qfield/error.hpp"
#include "qfield/fock_oracle.hpp"
#include "qfield/moments.hpp"
#include "qfield/params_json.hpp"
#include "qfield/squeezing.hpp"
#include "qfield/thermal.hpp"
#include "qfield/unitary.hpp"
