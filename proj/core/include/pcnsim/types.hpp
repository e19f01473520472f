#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pcnsim {

/// Dense node index, 0..n-1 within a graph.
using NodeId = std::uint32_t;

/// Integer fund-units.
using Amount = std::int64_t;

/// Simulated time in seconds.
using Seconds = double;

inline constexpr Seconds kNever = std::numeric_limits<double>::infinity();

/// Raised for malformed inputs: parameters, files, configs.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Protocol { Dpcn, Spider, Waterfilling };

inline std::string_view to_string(Protocol p) {
    switch (p) {
    case Protocol::Dpcn: return "dpcn";
    case Protocol::Spider: return "spider";
    case Protocol::Waterfilling: return "waterfilling";
    }
    return "?";
}

inline Protocol parse_protocol(std::string_view s) {
    if (s == "dpcn") return Protocol::Dpcn;
    if (s == "spider") return Protocol::Spider;
    if (s == "waterfilling") return Protocol::Waterfilling;
    throw InputError("unknown protocol '" + std::string(s) + "'");
}

}  // namespace pcnsim
