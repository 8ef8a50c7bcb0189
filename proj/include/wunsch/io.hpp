// io.hpp — deterministic file output: CSV series, spectrum JSON, manifests.
//
// All floating-point values are printed with 17 significant digits, so a
// rerun with the same configuration and seed produces byte-identical files.

#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wunsch/fourier.hpp"

namespace wunsch {

using ordered_json = nlohmann::ordered_json;

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_text(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << content;
}

// columns: x,value
inline void write_field_csv(const std::filesystem::path& path, const PeriodicField& f) {
    std::string body = "x,value\n";
    for (int j = 0; j < f.size(); ++j)
        body += fmt17(f.grid().node(j)) + "," + fmt17(f.samples()[j]) + "\n";
    write_text(path, body);
}

// columns: t,<name>
inline void write_series_csv(const std::filesystem::path& path, const std::string& name,
                             const std::vector<double>& t, const std::vector<double>& v) {
    if (t.size() != v.size())
        throw std::invalid_argument("write_series_csv: length mismatch");
    std::string body = "t," + name + "\n";
    for (std::size_t i = 0; i < t.size(); ++i)
        body += fmt17(t[i]) + "," + fmt17(v[i]) + "\n";
    write_text(path, body);
}

// arbitrary table with a header row
inline void write_table_csv(const std::filesystem::path& path,
                            const std::vector<std::string>& header,
                            const std::vector<std::vector<std::string>>& rows) {
    std::string body;
    for (std::size_t i = 0; i < header.size(); ++i)
        body += header[i] + (i + 1 < header.size() ? "," : "\n");
    for (const auto& row : rows)
        for (std::size_t i = 0; i < row.size(); ++i)
            body += row[i] + (i + 1 < row.size() ? "," : "\n");
    write_text(path, body);
}

// {"N": ..., "coeffs": [[re,im], ...]} ordered n = 0,1,…,N/2,−N/2+1,…,−1
inline ordered_json field_spectrum_json(const PeriodicField& f) {
    const int n = f.size(), m = n / 2;
    ordered_json coeffs = ordered_json::array();
    for (int k = 0; k <= m; ++k)
        coeffs.push_back({f.coeff(k).real(), f.coeff(k).imag()});
    for (int k = -m + 1; k <= -1; ++k) {
        const cplx c = std::conj(f.coeff(-k));
        coeffs.push_back({c.real(), c.imag()});
    }
    return ordered_json{{"N", n}, {"coeffs", coeffs}};
}

inline PeriodicField field_from_spectrum_json(const ordered_json& j) {
    const int n = j.at("N").get<int>();
    const GridSpec g(n);
    const auto& coeffs = j.at("coeffs");
    if (static_cast<int>(coeffs.size()) != n)
        throw std::invalid_argument("spectrum JSON must list N coefficients");
    std::vector<cplx> half(n / 2 + 1);
    for (int k = 0; k <= n / 2; ++k)
        half[k] = cplx(coeffs[k][0].get<double>(), coeffs[k][1].get<double>());
    return PeriodicField::from_spectrum(g, std::move(half));
}

inline void write_json(const std::filesystem::path& path, const ordered_json& j) {
    write_text(path, j.dump(2) + "\n");
}

} // namespace wunsch
