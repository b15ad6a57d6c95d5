#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace leeyang {

// Invalid user input: bad flag combination, malformed domain spec,
// out-of-contract parameter. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A request exceeded an engine cap. Carries the cap that would be needed
// so the caller can decide whether to re-run with a raised limit.
// Maps to CLI exit code 3.
class CapExceeded : public std::runtime_error {
public:
    CapExceeded(std::string kind, std::uint64_t required, std::uint64_t configured)
        : std::runtime_error("cap exceeded [" + kind + "]: required " +
                             std::to_string(required) + ", configured " +
                             std::to_string(configured)),
          kind(std::move(kind)),
          required(required),
          configured(configured) {}

    std::string kind;
    std::uint64_t required;
    std::uint64_t configured;
};

// Zero isolation could not account for all |Lambda| roots at the maximum
// scan resolution. Carries the suspect intervals so a caller may retry
// with higher precision. This is a failed completeness certificate, not
// a silent miss.
class ZeroCountError : public std::runtime_error {
public:
    struct Interval {
        double lo, hi;
    };

    ZeroCountError(int found, int expected, std::vector<Interval> suspects)
        : std::runtime_error("zero count certificate failed: found total multiplicity " +
                             std::to_string(found) + ", expected " + std::to_string(expected)),
          found(found),
          expected(expected),
          suspects(std::move(suspects)) {}

    int found;
    int expected;
    std::vector<Interval> suspects;
};

// Engine-wide resource limits. Defaults keep the exact oracle runnable
// on a laptop; every limit can be raised explicitly by the caller.
struct Caps {
    std::int64_t max_vertices = std::int64_t{1} << 20;
    int max_enum_log2 = 28;    // enumeration handles at most 2^28 configurations
    int max_state_width = 14;  // transfer cross-section of at most 2^14 states
    int max_kmax = 16;         // cumulant order cap
};

}  // namespace leeyang
