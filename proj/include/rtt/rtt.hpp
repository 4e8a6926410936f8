#pragma once

// Convenience header pulling in the whole library except the HTTP client
// (include rtt/remote.hpp for that).

#include "rtt/backends.hpp"
#include "rtt/constraints.hpp"
#include "rtt/engine.hpp"
#include "rtt/errors.hpp"
#include "rtt/experiments.hpp"
#include "rtt/importance.hpp"
#include "rtt/metrics.hpp"
#include "rtt/records.hpp"
#include "rtt/resources.hpp"
#include "rtt/text.hpp"
#include "rtt/transform.hpp"
#include "rtt/wire.hpp"
