#include "mixobs/measurement.hpp"

#include "mixobs/errors.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace mixobs {

void MeasurementVector::validate() const {
    if (coefficients.empty())
        throw std::invalid_argument("measurement vector is empty");
    bool any_nonzero = false;
    for (double c : coefficients) {
        if (!std::isfinite(c))
            throw std::invalid_argument("measurement vector has a non-finite entry");
        any_nonzero = any_nonzero || c != 0.0;
    }
    if (!any_nonzero)
        throw std::invalid_argument("measurement vector is all zero");
}

MeasurementVector unit_vector(std::size_t n, std::size_t index) {
    if (index >= n) throw std::invalid_argument("unit_vector: index out of range");
    MeasurementVector v;
    v.coefficients.assign(n, 0.0);
    v.coefficients[index] = 1.0;
    return v;
}

void Schedule::validate() const {
    if (rows.empty()) throw std::invalid_argument("schedule has no rows");
    const std::size_t width = rows.front().size();
    for (const auto& row : rows) {
        if (row.size() != width)
            throw std::invalid_argument("schedule rows have mixed lengths");
        row.validate();
    }
}

void Ensemble::validate() const {
    if (atoms.empty()) throw std::invalid_argument("ensemble has no atoms");
    if (weights.size() != atoms.size())
        throw std::invalid_argument("ensemble weight/atom count mismatch");
    const std::size_t width = atoms.front().size();
    double total = 0.0;
    for (std::size_t t = 0; t < atoms.size(); ++t) {
        if (atoms[t].size() != width)
            throw std::invalid_argument("ensemble atoms have mixed lengths");
        atoms[t].validate();
        if (!(weights[t] >= 0.0) || !std::isfinite(weights[t]))
            throw std::invalid_argument("ensemble weight must be finite and >= 0");
        total += weights[t];
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("ensemble weights do not sum to 1");
}

Ensemble Ensemble::uniform(std::vector<MeasurementVector> atoms) {
    Ensemble e;
    e.weights.assign(atoms.size(), 1.0 / static_cast<double>(atoms.size()));
    e.atoms = std::move(atoms);
    e.validate();
    return e;
}

Ensemble Ensemble::from_schedule(const Schedule& schedule) {
    schedule.validate();
    std::map<std::vector<double>, std::size_t> counts;
    for (const auto& row : schedule.rows) ++counts[row.coefficients];
    Ensemble e;
    const double m = static_cast<double>(schedule.m());
    for (const auto& [coeffs, count] : counts) {
        e.atoms.push_back(MeasurementVector{coeffs});
        e.weights.push_back(static_cast<double>(count) / m);
    }
    e.validate();
    return e;
}

std::string format_double(double value) {
    if (std::isfinite(value) && value == std::floor(value) && std::abs(value) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.0f", value);
        return buf;
    }
    // shortest representation that round-trips
    for (int prec = 1; prec <= 17; ++prec) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.*g", prec, value);
        if (std::strtod(buf, nullptr) == value) return buf;
    }
    return "nan";
}

void write_schedule(std::ostream& out, const Schedule& schedule) {
    schedule.validate();
    out << schedule.m() << ' ' << schedule.n() << '\n';
    for (const auto& row : schedule.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ' ';
            out << format_double(row[i]);
        }
        out << '\n';
    }
}

Schedule read_schedule(std::istream& in) {
    std::size_t m = 0, n = 0;
    if (!(in >> m >> n)) throw ConfigError("schedule file: missing 'm n' header");
    if (m == 0 || n == 0) throw ConfigError("schedule file: m and n must be positive");
    Schedule s;
    s.rows.reserve(m);
    for (std::size_t j = 0; j < m; ++j) {
        MeasurementVector row;
        row.coefficients.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (!(in >> row.coefficients[i]))
                throw ConfigError("schedule file: truncated at row " + std::to_string(j + 1));
        }
        s.rows.push_back(std::move(row));
    }
    s.validate();
    return s;
}

void write_schedule_file(const std::string& path, const Schedule& schedule) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    write_schedule(out, schedule);
}

Schedule read_schedule_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open schedule file: " + path);
    return read_schedule(in);
}

} // namespace mixobs
