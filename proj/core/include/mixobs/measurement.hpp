#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace mixobs {

/// One linear mixing vector: measurement Y = sum_i coefficients[i] * X_i.
struct MeasurementVector {
    std::vector<double> coefficients;

    std::size_t size() const { return coefficients.size(); }
    double operator[](std::size_t i) const { return coefficients[i]; }

    /// Throws unless all entries are finite and at least one is nonzero.
    void validate() const;

    friend bool operator==(const MeasurementVector&, const MeasurementVector&) = default;
};

MeasurementVector unit_vector(std::size_t n, std::size_t index);

/// An ordered list of m mixing vectors, one per time index.
struct Schedule {
    std::vector<MeasurementVector> rows;

    std::size_t m() const { return rows.size(); }
    std::size_t n() const { return rows.empty() ? 0 : rows.front().size(); }

    /// Throws unless m >= 1 and all rows share one length.
    void validate() const;
};

/// A finite-support distribution over mixing vectors: atoms with
/// nonnegative weights summing to 1 (within 1e-12).
struct Ensemble {
    std::vector<MeasurementVector> atoms;
    std::vector<double> weights;

    std::size_t size() const { return atoms.size(); }
    std::size_t n() const { return atoms.empty() ? 0 : atoms.front().size(); }

    void validate() const;

    /// Equal weight on each of the given vectors.
    static Ensemble uniform(std::vector<MeasurementVector> atoms);

    /// Empirical distribution of a schedule's rows: distinct rows become
    /// atoms weighted by frequency. This is how a deterministic
    /// time-varying schedule enters exponent computations.
    static Ensemble from_schedule(const Schedule& schedule);
};

/// Schedule file format: first line "m n", then m whitespace-delimited
/// coefficient rows. Integer coefficients round-trip bit-exactly.
void write_schedule(std::ostream& out, const Schedule& schedule);
Schedule read_schedule(std::istream& in);
void write_schedule_file(const std::string& path, const Schedule& schedule);
Schedule read_schedule_file(const std::string& path);

/// Shortest decimal form that parses back to the same double; integers
/// print without a decimal point.
std::string format_double(double value);

} // namespace mixobs
