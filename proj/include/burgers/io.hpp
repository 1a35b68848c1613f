#pragma once

// CSV tables with 17 significant digits, raw field dumps, and JSON run manifests.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "burgers/grid.hpp"

#ifndef BURGERS_VERSION
#define BURGERS_VERSION "0.0.0"
#endif

namespace burgers {

inline const char* library_version() { return BURGERS_VERSION; }

// Column-named numeric table; the common currency of histories and reports.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    Table() = default;
    explicit Table(std::vector<std::string> cols) : columns(std::move(cols)) {}

    void add(std::vector<double> row) {
        if (row.size() != columns.size()) throw std::logic_error("table row width mismatch");
        rows.push_back(std::move(row));
    }
    int column(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return static_cast<int>(i);
        throw std::out_of_range("no column " + name);
    }
    std::vector<double> values(const std::string& name) const {
        const int c = column(name);
        std::vector<double> v;
        v.reserve(rows.size());
        for (const auto& r : rows) v.push_back(r[c]);
        return v;
    }
};

inline std::string format_double(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

inline void write_csv(std::ostream& os, const Table& t) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_double(r[i]);
        os << '\n';
    }
}

inline void write_csv(const std::filesystem::path& path, const Table& t) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    write_csv(os, t);
}

// Field dump: little-endian header {magic "BVF1", ncomp, n, n3, R, Z} followed by doubles.
inline void write_field(const std::filesystem::path& path, const std::vector<const std::vector<double>*>& comps,
                        int n, int n3, double R, double Z) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os.write("BVF1", 4);
    const std::int32_t hdr[3] = {static_cast<std::int32_t>(comps.size()), n, n3};
    os.write(reinterpret_cast<const char*>(hdr), sizeof hdr);
    const double geo[2] = {R, Z};
    os.write(reinterpret_cast<const char*>(geo), sizeof geo);
    for (const auto* c : comps) os.write(reinterpret_cast<const char*>(c->data()), static_cast<std::streamsize>(c->size() * sizeof(double)));
}

inline void write_field(const std::filesystem::path& path, const ScalarField2D& f) {
    write_field(path, {&f.v}, f.grid.n, 1, f.grid.R, 0.0);
}
inline void write_field(const std::filesystem::path& path, const VectorField3D& f) {
    write_field(path, {&f.c[0], &f.c[1], &f.c[2]}, f.grid.h2.n, f.grid.n3, f.grid.h2.R, f.grid.Z);
}

// Manifest: caller-provided config and results plus version and wall time.
class Manifest {
public:
    explicit Manifest(std::string command) : start_(std::chrono::steady_clock::now()) {
        j_["command"] = std::move(command);
        j_["version"] = library_version();
    }
    nlohmann::json& json() { return j_; }
    void write(const std::filesystem::path& path) {
        j_["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
        std::ofstream os(path);
        if (!os) throw std::runtime_error("cannot write " + path.string());
        os << std::setw(2) << j_ << '\n';
    }

private:
    nlohmann::json j_;
    std::chrono::steady_clock::time_point start_;
};

}  // namespace burgers
