#pragma once

#include "parhom/error.hpp"
#include "parhom/dynkin.hpp"
#include "parhom/root_weyl.hpp"
#include "parhom/parabolic.hpp"
#include "parhom/connectivity.hpp"
#include "parhom/report.hpp"
