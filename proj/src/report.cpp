#include "jacobi/report.hpp"

#include <cmath>
#include <cstdio>

#include "jacobi/version.hpp"

namespace jacobi {

std::string format_float(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

void dump_rec(const ojson& j, std::string& out, int depth) {
    const std::string pad(2 * static_cast<std::size_t>(depth), ' ');
    const std::string pad_in(2 * static_cast<std::size_t>(depth + 1), ' ');
    switch (j.type()) {
        case ojson::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (const auto& item : j.items()) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in;
                out += ojson(item.key()).dump();
                out += ": ";
                dump_rec(item.value(), out, depth + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case ojson::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ",\n";
                out += pad_in;
                dump_rec(j[i], out, depth + 1);
            }
            out += "\n" + pad + "]";
            return;
        }
        case ojson::value_t::number_float: {
            double x = j.get<double>();
            if (std::isfinite(x)) {
                out += format_float(x);
            } else {
                out += '"';
                out += format_float(x);  // nan / inf / -inf
                out += '"';
            }
            return;
        }
        default:
            out += j.dump();
            return;
    }
}

}  // namespace

std::string dump_json(const ojson& j) {
    std::string out;
    dump_rec(j, out, 0);
    out += "\n";
    return out;
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string config_hash(const ojson& config) {
    // Plain json sorts object keys, so the hash ignores key order in the file.
    nlohmann::json canonical = config;
    std::uint64_t h = fnv1a64(canonical.dump());
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ojson with_provenance(const ojson& config, ojson body) {
    ojson out;
    out["version"] = kVersion;
    out["config_hash"] = config_hash(config);
    for (auto& item : body.items()) out[item.key()] = std::move(item.value());
    return out;
}

ojson vec2_json(const Vec2& v) { return ojson::array({v.x, v.y}); }

ojson mat2_json(const Mat2& m) {
    return ojson::array({ojson::array({m.a, m.b}), ojson::array({m.c, m.d})});
}

ojson to_json(const VariationReport& r, const std::string& name) {
    ojson j;
    j["name"] = name;
    j["N"] = r.order;
    j["total"] = r.total;
    j["tail_slope"] = r.tail_slope;
    j["decade_ratio"] = r.decade_ratio;
    j["verdict"] = to_string(r.verdict);
    ojson parts = ojson::array();
    for (const auto& [n, v] : r.partials) parts.push_back(ojson::array({n, v}));
    j["partials"] = std::move(parts);
    return j;
}

ojson to_json(const RegularHypothesisReport& r) {
    ojson j;
    j["period"] = r.period;
    j["inv_a"] = to_json(r.inv_a, "inv_a");
    j["b_over_a"] = to_json(r.b_over_a, "b_over_a");
    j["a_ratio"] = to_json(r.a_ratio, "a_ratio");
    j["inv_a_tail"] = r.inv_a_tail;
    return j;
}

ojson to_json(const CriticalHypothesisReport& r) {
    ojson j;
    j["period"] = r.period;
    j["q"] = r.q;
    j["a_diff"] = to_json(r.a_diff, "a_diff");
    j["inv_a"] = to_json(r.inv_a, "inv_a");
    j["b_shift"] = to_json(r.b_shift, "b_shift");
    j["s"] = r.s;
    j["s_sum"] = r.s_sum;
    j["b_shift_tail"] = r.b_shift_tail;
    return j;
}

ojson to_json(const RegularLimits& l) {
    ojson j;
    j["period"] = l.period;
    j["q"] = l.q;
    j["r"] = l.r;
    j["q_tail"] = l.q_tail;
    j["r_tail"] = l.r_tail;
    j["q_residual"] = l.q_residual;
    j["r_residual"] = l.r_residual;
    j["transfer"] = mat2_json(l.transfer);
    j["det_sym_e_transfer"] = l.det_sym_e_transfer;
    return j;
}

ojson to_json(const RegimeVerdict& v) {
    ojson j;
    j["kind"] = to_string(v.kind);
    j["det_value"] = v.det_value;
    if (v.kind == RegimeVerdict::Kind::Critical) {
        j["q"] = v.q;
        j["k0"] = v.k0;
    }
    return j;
}

ojson to_json(const GapEstimate& g) {
    ojson j;
    j["quad_a"] = g.quad_a;
    j["quad_b"] = g.quad_b;
    j["quad_c"] = g.quad_c;
    j["discriminant"] = g.discriminant;
    j["lambda_minus"] = g.lambda_minus;
    j["lambda_plus"] = g.lambda_plus;
    j["degenerate_point"] = g.degenerate_point;
    return j;
}

ojson to_json(const CarlemanVerdict& v) {
    ojson j;
    j["kind"] = to_string(v.kind);
    j["partial"] = v.partial;
    j["n_used"] = v.n_used;
    j["bound"] = v.bound;
    j["reason"] = v.reason;
    return j;
}

ojson to_json(const SandwichEstimate& s) {
    ojson j;
    j["lambda"] = s.lambda;
    j["any_growth"] = s.any_growth;
    ojson runs = ojson::array();
    for (const SandwichRun& r : s.runs) {
        ojson jr;
        jr["alpha"] = vec2_json(r.alpha);
        jr["log_rho_min"] = r.log_rho_min;
        jr["log_rho_max"] = r.log_rho_max;
        jr["ratio"] = r.ratio;
        jr["decade_slopes"] = ojson::array({r.decade_slopes[0], r.decade_slopes[1],
                                            r.decade_slopes[2]});
        jr["growth"] = r.growth;
        runs.push_back(std::move(jr));
    }
    j["runs"] = std::move(runs);
    return j;
}

ojson to_json(const TuranTrace& t) {
    ojson j;
    j["lambda"] = t.lambda;
    j["alpha"] = vec2_json(t.alpha);
    j["mode"] = to_string(t.mode.kind);
    j["period"] = t.period;
    j["tail_start"] = t.tail_start;
    j["limit_estimate"] = t.limit_estimate;
    j["residue_limits"] = t.residue_limits;
    j["sign"] = t.sign;
    j["sign_constant"] = t.sign_constant;
    j["max_telescope_residual"] = t.max_telescope_residual;
    j["beta_estimate"] = t.beta_estimate;
    j["sample_count"] = t.samples.size();
    return j;
}

ojson to_json(const ProfileResult& p) {
    ojson j;
    j["period"] = p.period;
    j["lambda"] = p.lambda;
    ojson entries = ojson::array();
    for (const ProfileEntry& e : p.entries) {
        ojson je;
        je["residue"] = e.residue;
        je["limit"] = e.limit;
        je["oscillation"] = e.oscillation;
        je["settled"] = e.settled;
        entries.push_back(std::move(je));
    }
    j["entries"] = std::move(entries);
    return j;
}

ojson to_json(const IgnjatovicResult& r) {
    ojson j;
    j["x"] = r.x;
    j["limit"] = r.limit;
    j["converged"] = r.converged;
    ojson ratios = ojson::array();
    for (const auto& [n, v] : r.ratios) ratios.push_back(ojson::array({n, v}));
    j["ratios"] = std::move(ratios);
    return j;
}

std::string trajectory_csv(const Trajectory& t) {
    std::string out = "n,u_prev,u_cur,log_scale\n";
    for (const TrajectorySample& s : t.samples) {
        out += std::to_string(s.n);
        out += ',';
        out += format_float(s.u_prev);
        out += ',';
        out += format_float(s.u_cur);
        out += ',';
        out += format_float(s.log_scale);
        out += '\n';
    }
    return out;
}

std::string poly_csv(const PolyTrajectory& t) {
    // True-scale columns: they overflow to inf only when the orbit genuinely
    // grows past double range, which the log columns of the other files cover.
    std::string out = "n,p_n,partial_sum_sq\n";
    for (const PolySample& s : t.samples) {
        out += std::to_string(s.n);
        out += ',';
        out += format_float(s.p * std::exp(s.log_scale));
        out += ',';
        out += format_float(std::exp(s.sum_sq_log));
        out += '\n';
    }
    return out;
}

std::string turan_csv(const TuranTrace& t) {
    std::string out = "n,s_n,log_scale,f_n\n";
    for (const TuranSample& s : t.samples) {
        out += std::to_string(s.n);
        out += ',';
        out += format_float(s.s_scaled);
        out += ',';
        out += format_float(s.log_scale);
        out += ',';
        out += format_float(s.f_value);
        out += '\n';
    }
    return out;
}

std::string profile_csv(const ProfileResult& p) {
    std::string out = "residue,limit,oscillation,settled\n";
    for (const ProfileEntry& e : p.entries) {
        out += std::to_string(e.residue);
        out += ',';
        out += format_float(e.limit);
        out += ',';
        out += format_float(e.oscillation);
        out += ',';
        out += e.settled ? '1' : '0';
        out += '\n';
    }
    return out;
}

}  // namespace jacobi
