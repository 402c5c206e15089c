#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lcx {

using LandmarkId = std::uint32_t;
using AgentIndex = std::uint32_t;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
    friend bool operator==(Vec2 a, Vec2 b) = default;

    double norm() const { return std::hypot(x, y); }
    double norm2() const { return x * x + y * y; }
};

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

enum class Errc {
    EmptyObservation,
    UnknownLandmark,
    VersionOutOfRange,
    VersionGap,
    StaleVersion,
    MalformedObservation,
    InvalidAgent,
    ActionCountMismatch,
    InvalidConfig,
    NoFreeSpace,
    SpawnFailure,
    SamplingFailure,
    Protocol,
    Io,
};

std::string_view to_string(Errc code);

/// All library failures are reported through this type; `code()` tells them apart.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace lcx
