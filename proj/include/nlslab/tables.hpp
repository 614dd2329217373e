#pragma once

#include <cstdio>
#include <ostream>
#include <string>

#include "nlslab/thresholds.hpp"

namespace nlslab {

enum class TableKind { KappaEnergy, GaussianThresholds };

inline TableKind parse_table_kind(const std::string& s) {
    if (s == "kappa_energy") return TableKind::KappaEnergy;
    if (s == "gaussian_thresholds") return TableKind::GaussianThresholds;
    throw MalformedInput("unknown table '" + s + "' (kappa_energy | gaussian_thresholds)");
}

struct TableRow {
    int N = 0;
    double first = 0.0;
    double second = 0.0;
};

/*
 * Energy-critical Gaussian thresholds per dimension:
 *   kappa_energy         κ_s, κ_b where E/E[W] = 1
 *   gaussian_thresholds  κ above which each variance-barrier criterion fires
 */
inline std::vector<TableRow> threshold_table(TableKind kind, int n_min = 3, int n_max = 8) {
    if (n_min < 3 || n_max < n_min) throw MalformedInput("tables: need 3 <= N-min <= N-max");
    std::vector<TableRow> rows;
    for (int N = n_min; N <= n_max; ++N) {
        if (kind == TableKind::KappaEnergy) {
            const auto [ks, kb] = kappa_energy_roots(N);
            rows.push_back({N, ks, kb});
        } else {
            const auto t = gaussian_blowup_thresholds(make_params(critical_exponent(N), N));
            rows.push_back({N, t.kappa_T1, t.kappa_T2});
        }
    }
    return rows;
}

/// Four decimals, matching the printed tables.
inline void write_table_csv(std::ostream& out, TableKind kind, const std::vector<TableRow>& rows) {
    out << (kind == TableKind::KappaEnergy ? "N,kappa_s,kappa_b\n" : "N,kappa_T1,kappa_T2\n");
    char buf[64];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%d,%.4f,%.4f\n", r.N, r.first, r.second);
        out << buf;
    }
}

}  // namespace nlslab
