#pragma once

#include <memory>

#include <spdlog/logger.h>

namespace litrank {

// Shared stderr logger; data never goes through it.
spdlog::logger& logger();

}  // namespace litrank
