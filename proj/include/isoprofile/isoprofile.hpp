#pragma once

#include "isoprofile/constants.hpp"
#include "isoprofile/error.hpp"
#include "isoprofile/numerics.hpp"
#include "isoprofile/parallel.hpp"
#include "isoprofile/profile.hpp"
#include "isoprofile/spaceform.hpp"
#include "isoprofile/viscosity.hpp"
#include "isoprofile/warped.hpp"
