#pragma once

#include <stdexcept>
#include <string>

namespace esn {

enum class error_kind { domain, boundary, regime, numeric, accuracy, precision, solver, resource, rejected_parameters };

inline const char* to_string(error_kind k) {
    switch (k) {
    case error_kind::domain: return "domain error";
    case error_kind::boundary: return "boundary error";
    case error_kind::regime: return "regime error";
    case error_kind::numeric: return "numeric error";
    case error_kind::accuracy: return "accuracy error";
    case error_kind::precision: return "precision error";
    case error_kind::solver: return "solver error";
    case error_kind::resource: return "resource error";
    case error_kind::rejected_parameters: return "rejected parameters";
    }
    return "error";
}

// Every failure carries the operation that raised it so callers can report
// it verbatim.  `estimate` holds an achieved error figure when one exists.
class error : public std::runtime_error {
public:
    error(error_kind kind, std::string operation, const std::string& detail, double estimate = 0.0)
        : std::runtime_error(operation + ": " + to_string(kind) + ": " + detail),
          kind_(kind), operation_(std::move(operation)), estimate_(estimate) {}

    error_kind kind() const noexcept { return kind_; }
    const std::string& operation() const noexcept { return operation_; }
    double estimate() const noexcept { return estimate_; }

private:
    error_kind kind_;
    std::string operation_;
    double estimate_;
};

} // namespace esn
