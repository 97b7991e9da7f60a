#pragma once

#include <stdexcept>
#include <string>

namespace cbrgda {

// Every recoverable failure in the engine maps to one of these codes.
// The CLI translates a subset of them to process exit codes.
enum class Errc {
    malformed_record,
    duplicate_feature,
    empty_solution,
    out_of_range,
    duplicate_id,
    dim_mismatch,
    no_weighted_features,
    nothing_retrieved,
    empty_after_transform,
    arity_mismatch,
    no_applicable_template,
    empty_case_base,
    stack_overflow,
    precondition_violated,
    environment_halted,
    too_few_points,
    empty_input,
    invalid_config,
    io_error,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) {
    throw Error(code, what);
}

inline void require(bool ok, Errc code, const std::string& what) {
    if (!ok) raise(code, what);
}

}  // namespace cbrgda
