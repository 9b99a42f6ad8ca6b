#pragma once

#include <stdexcept>
#include <string>

namespace polyconc {

// Bad inputs: dimension mismatches, invalid domains, malformed configs.
// The CLI maps this to exit code 2.
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// Well-formed inputs whose computation cannot proceed: divergent integrals,
// violated lemma preconditions, estimator breakdown. CLI exit code 3.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace polyconc
