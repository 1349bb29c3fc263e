#pragma once

#include <stdexcept>
#include <string>

namespace robin {

// Coarse failure class; the CLI maps each to an exit code.
enum class ErrorClass { Validation, Nonconvergence, Contract };

class Error : public std::runtime_error {
public:
    Error(std::string kind, ErrorClass cls, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)), cls_(cls) {}
    const std::string& kind() const noexcept { return kind_; }
    ErrorClass error_class() const noexcept { return cls_; }

private:
    std::string kind_;
    ErrorClass cls_;
};

inline Error validation_error(const std::string& kind, const std::string& what) {
    return Error(kind, ErrorClass::Validation, what);
}
inline Error contract_error(const std::string& kind, const std::string& what) {
    return Error(kind, ErrorClass::Contract, what);
}
inline Error nonconvergence_error(const std::string& kind, const std::string& what) {
    return Error(kind, ErrorClass::Nonconvergence, what);
}

}  // namespace robin
