#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace gwlab {

// Base class for all library errors. Subclasses carry the context a caller
// needs to decide between retry, reconfigure and abort.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed serialized input (LUK/PAREN/SIN payloads, literals, configs).
class ParseError : public Error {
public:
    ParseError(std::string expected, std::size_t offset)
        : Error("parse error at byte " + std::to_string(offset) + ": expected " + expected),
          expected_(std::move(expected)),
          offset_(offset) {}

    const std::string& expected() const { return expected_; }
    std::size_t offset() const { return offset_; }

private:
    std::string expected_;
    std::size_t offset_;
};

// A sampler hit its size cap; partial_size is how far it got.
class SizeCapError : public Error {
public:
    SizeCapError(std::string context, std::uint64_t partial_size)
        : Error(context + ": size cap exceeded (partial size " + std::to_string(partial_size) + ")"),
          partial_size_(partial_size) {}

    std::uint64_t partial_size() const { return partial_size_; }

private:
    std::uint64_t partial_size_;
};

// ODE integrator failed to converge; carries the state at failure.
class IntegrationError : public Error {
public:
    IntegrationError(double a, double lambda, double last_u)
        : Error("cumulant integration did not converge (a=" + std::to_string(a) +
                ", lambda=" + std::to_string(lambda) + ", last u=" + std::to_string(last_u) + ")"),
          a_(a),
          lambda_(lambda),
          last_u_(last_u) {}

    double a() const { return a_; }
    double lambda() const { return lambda_; }
    double last_u() const { return last_u_; }

private:
    double a_, lambda_, last_u_;
};

// Operation requires an analytic condition the mechanism does not satisfy
// (e.g. the extinction functional without the Grey condition).
class UnsupportedMechanismError : public Error {
public:
    using Error::Error;
};

// A sin-tree was materialized too shallow for the requested prefix.
class TruncationError : public Error {
public:
    TruncationError(std::size_t requested_steps, int required_depth)
        : Error("spine truncation too shallow: need depth >= " + std::to_string(required_depth) +
                " for " + std::to_string(requested_steps) + " steps"),
          requested_steps_(requested_steps),
          required_depth_(required_depth) {}

    std::size_t requested_steps() const { return requested_steps_; }
    int required_depth() const { return required_depth_; }

private:
    std::size_t requested_steps_;
    int required_depth_;
};

// Invalid experiment configuration (degenerate laws, missing keys, bad values).
class ConfigError : public Error {
public:
    using Error::Error;
};

// Exact enumeration lost too much mass to a truncation cap to be conclusive.
class InconclusiveError : public Error {
public:
    InconclusiveError(std::string context, double leak_mass)
        : Error(context + ": enumeration leak " + std::to_string(leak_mass) + " above tolerance"),
          leak_mass_(leak_mass) {}

    double leak_mass() const { return leak_mass_; }

private:
    double leak_mass_;
};

}  // namespace gwlab
