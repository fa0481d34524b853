#pragma once

#include "ofd/advice.hpp"
#include "ofd/axioms.hpp"
#include "ofd/core.hpp"
#include "ofd/evaluation.hpp"
#include "ofd/harness.hpp"
#include "ofd/instance_io.hpp"
#include "ofd/instances.hpp"
#include "ofd/matrix.hpp"
#include "ofd/mechanisms.hpp"
#include "ofd/offline.hpp"
#include "ofd/rational.hpp"
