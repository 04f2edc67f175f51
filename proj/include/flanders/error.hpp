#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace flanders {

enum class errc {
    division_by_zero,
    dimension_mismatch,
    field_mismatch,
    shape_mismatch,
    param_out_of_range,
    index_out_of_range,
    not_invertible,
    budget_exceeded,
    wrong_field,
    unknown_check,
    usage_error,
    format_error,
};

class error : public std::runtime_error {
public:
    error(errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    errc code() const { return code_; }

private:
    errc code_;
};

// Budget refusals carry the count the caller would have needed.
class budget_error : public error {
public:
    budget_error(std::uint64_t required, std::uint64_t budget, const std::string& what_for)
        : error(errc::budget_exceeded,
                what_for + " needs " + std::to_string(required) + " items, budget is " +
                    std::to_string(budget)),
          required_(required) {}
    std::uint64_t required() const { return required_; }

private:
    std::uint64_t required_;
};

[[noreturn]] inline void fail(errc c, const std::string& msg) { throw error(c, msg); }

} // namespace flanders
