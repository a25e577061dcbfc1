#pragma once

#include <stdexcept>
#include <string>

namespace rigid {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or non-finite arguments.
struct InvalidInput : Error {
    explicit InvalidInput(const std::string& what) : Error(what) {}
};

// Evaluation requested outside the domain of a formula (origin, poles, wrong stratum).
struct DomainError : Error {
    explicit DomainError(const std::string& what) : Error(what) {}
};

// a1 = a2 = a3 = 0: the cubic part vanishes (Riccati case); sphere analysis refuses it.
struct DegenerateFamily : Error {
    explicit DegenerateFamily(const std::string& what) : Error(what) {}
};

// Equator shooting started at a critical direction.
struct CriticalStart : Error {
    explicit CriticalStart(const std::string& what) : Error(what) {}
};

// The periodic-orbit search is meaningless for centers: a whole annulus exists.
struct CenterFamily : Error {
    explicit CenterFamily(const std::string& what) : Error(what) {}
};

}  // namespace rigid
