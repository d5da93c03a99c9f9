#pragma once

#include "veridec/axioms.hpp"
#include "veridec/decision.hpp"
#include "veridec/errors.hpp"
#include "veridec/events.hpp"
#include "veridec/identification.hpp"
#include "veridec/io.hpp"
#include "veridec/set_function.hpp"
#include "veridec/welfare.hpp"
