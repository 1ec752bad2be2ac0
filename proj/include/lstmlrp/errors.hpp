#pragma once

#include <stdexcept>
#include <string>

namespace lstmlrp {

// Shape/size violations at call boundaries.
class dimension_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// NaN/Inf produced by a numeric kernel. For recurrent code the timestep
// (1-based) of the offending activation is attached when known.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& msg, int timestep = -1)
        : std::runtime_error(msg), timestep_(timestep) {}
    int timestep() const { return timestep_; }

private:
    int timestep_;
};

// The caller of a relevance-redistribution rule handed in values that do not
// reproduce the forward pass (z_upper != W z_lower + b).
class consistency_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed corpus file; line is 1-based.
class corpus_error : public std::runtime_error {
public:
    corpus_error(const std::string& msg, int line)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

enum class archive_fault {
    io_failure,
    bad_magic,
    bad_header,
    missing_parameter,
    unknown_parameter,
    duplicate_parameter,
    shape_mismatch,
    truncated_payload,
    trailing_data,
};

// Weight-archive load/save problems, one fault kind per failure mode.
class archive_error : public std::runtime_error {
public:
    archive_error(archive_fault fault, const std::string& msg)
        : std::runtime_error(msg), fault_(fault) {}
    archive_fault fault() const { return fault_; }

private:
    archive_fault fault_;
};

// Training produced a non-finite loss; epoch is 1-based.
class divergence_error : public std::runtime_error {
public:
    divergence_error(const std::string& msg, int epoch)
        : std::runtime_error(msg), epoch_(epoch) {}
    int epoch() const { return epoch_; }

private:
    int epoch_;
};

// Evaluation protocol precondition failures (empty filtered subset, ...).
class eval_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace lstmlrp
