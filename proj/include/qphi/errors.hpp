#pragma once

#include <stdexcept>
#include <string>

namespace qphi {

// Base class for everything thrown by the engine.
struct engine_error : std::runtime_error {
    explicit engine_error(const std::string& what) : std::runtime_error(what) {}
};

// A caller violated a documented precondition (ring mismatch, bad
// progression parameters, out-of-range color count, ...).
struct contract_error : engine_error {
    explicit contract_error(const std::string& what) : engine_error(what) {}
};

// inverse() was asked for a series whose constant term is not a unit.
struct non_invertible_error : engine_error {
    explicit non_invertible_error(const std::string& what) : engine_error(what) {}
};

inline void require(bool ok, const char* message) {
    if (!ok) throw contract_error(message);
}

}  // namespace qphi
