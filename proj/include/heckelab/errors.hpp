#pragma once

#include <stdexcept>
#include <string>

namespace heckelab {

/// Malformed or unreadable table files, filesystem failures.
class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

/// Eigenvalue data that fails the Hecke-relation audit. Carries the first
/// counterexample in the message.
class audit_error : public std::runtime_error {
public:
    explicit audit_error(const std::string& what) : std::runtime_error(what) {}
};

/// A pair of forms fails the hypotheses of the squared-dominance theorem
/// (CM form, quadratic twists, or an inconclusive detector). Raised instead
/// of emitting a meaningless number; the CLI maps it to exit code 3.
class hypothesis_error : public std::runtime_error {
public:
    explicit hypothesis_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace heckelab
