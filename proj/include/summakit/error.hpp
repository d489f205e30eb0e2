#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace summakit {

/// Base of every error thrown by the library. Callers that only care about
/// "something about the input was wrong" can catch this one type.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class zero_diagonal : public error {
public:
    explicit zero_diagonal(std::size_t row)
        : error("zero diagonal entry at row " + std::to_string(row)), row_(row) {}

    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

class shape_mismatch : public error {
public:
    using error::error;
};

class length_mismatch : public error {
public:
    using error::error;
};

class size_mismatch : public error {
public:
    using error::error;
};

class bad_exponent : public error {
public:
    explicit bad_exponent(double k)
        : error("exponent k must satisfy k >= 1, got " + std::to_string(k)), k_(k) {}

    double k() const noexcept { return k_; }

private:
    double k_;
};

class bad_weights : public error {
public:
    using error::error;
};

class bad_tail : public error {
public:
    using error::error;
};

/// A tail sum needs matrix or weight entries beyond what the source can provide.
class tail_unavailable : public error {
public:
    using error::error;
};

class index_out_of_range : public error {
public:
    using error::error;
};

class degenerate_probe : public error {
public:
    using error::error;
};

inline void require_exponent(double k) {
    if (!(k >= 1.0)) throw bad_exponent(k);
}

} // namespace summakit
