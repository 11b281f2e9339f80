#pragma once

#include "bergman/error.hpp"
#include "bergman/parallel.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/shadow.hpp"
#include "bergman/disk.hpp"
#include "bergman/symbol.hpp"
#include "bergman/moments.hpp"
#include "bergman/sections.hpp"
#include "bergman/report.hpp"
#include "bergman/lab.hpp"
#include "bergman/config.hpp"
#include "bergman/cli.hpp"
