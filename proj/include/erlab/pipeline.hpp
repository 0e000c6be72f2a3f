#pragma once

#include "erlab/hadamard.hpp"
#include "erlab/lp.hpp"
#include "erlab/pattern.hpp"
#include "erlab/union_bound.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace erlab {

using json = nlohmann::json;

class PipelineError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct StepResult {
    std::string name, op;
    bool pass = false;
    json detail;
};

struct PipelineReport {
    std::string name;
    bool pass = true;
    std::vector<StepResult> steps;
    std::vector<LinearConstraint> system;
    double seconds = 0;

    const StepResult* step(const std::string& n) const
    {
        for (const auto& s : steps)
            if (s.name == n) return &s;
        return nullptr;
    }
};

inline std::vector<Rational> density_of_realization(const std::vector<int>& columns)
{
    auto h = normalize(sylvester(3));
    auto p = pattern_from_columns(h, columns);
    return density_vector(p, uniform_weights(p.r()));
}

namespace detail {

inline Rational jrat(const json& v)
{
    if (v.is_number_integer()) return Rational(v.get<long>());
    if (!v.is_string()) throw PipelineError("expected a rational string, got " + v.dump());
    return parse_rational(v.get<std::string>());
}

inline LogLinear jlog(const json& v)
{
    if (v.is_number_integer()) return LogLinear(v.get<long>());
    if (!v.is_string()) throw PipelineError("expected a log-linear literal, got " + v.dump());
    return parse_loglinear(v.get<std::string>());
}

inline json loglin_json(const LogLinear& x) { return json{{"exact", x.str()}, {"approx", x.to_double()}}; }

inline json constraint_json(const LinearConstraint& c)
{
    json a = json::array();
    for (const auto& x : c.a) a.push_back(x.get_str());
    return json{{"name", c.name}, {"tag", tag_name(c.tag)}, {"a", a}, {"b", c.b.get_str()}};
}

class PipelineRunner {
public:
    explicit PipelineRunner(const json& spec) : spec_(spec)
    {
        k_ = parse_kvector(spec.at("k").get<std::string>());
        s_ = k_.s();
        candidate_ = jlog(spec.at("candidate"));
        system_.push_back(basic_constraint(k_));
        system_.push_back(total_density_constraint(s_));
        named_["basic"] = system_[0];
        named_["total"] = system_[1];
    }

    PipelineReport run()
    {
        auto t0 = std::chrono::steady_clock::now();
        PipelineReport rep;
        rep.name = spec_.value("case", std::string("pipeline"));
        for (const auto& st : spec_.at("steps")) {
            StepResult r;
            r.name = st.at("name").get<std::string>();
            r.op = st.at("op").get<std::string>();
            try {
                r.pass = dispatch(st, r.detail);
            } catch (const PipelineError&) {
                throw;
            } catch (const std::exception& e) {
                r.pass = false;
                r.detail["error"] = e.what();
            }
            if (!r.pass) rep.pass = false;
            rep.steps.push_back(std::move(r));
        }
        rep.system = system_;
        rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return rep;
    }

private:
    LinearConstraint constraint(const json& c)
    {
        std::string kind = c.at("kind").get<std::string>();
        if (kind == "basic") return named_.at("basic");
        if (kind == "total") return named_.at("total");
        if (kind == "probe") return probe_constraint(s_, jrat(c.at("rhs")));
        if (kind == "pair_union") return pair_union_constraint(s_, jrat(c.at("cap")));
        if (kind == "conjectured") return conjectured_ks_constraint(s_, c.at("k").get<int>());
        if (kind == "emitted") {
            auto it = named_.find(c.at("name").get<std::string>());
            if (it == named_.end()) throw PipelineError("unknown emitted constraint " + c.at("name").dump());
            return it->second;
        }
        throw PipelineError("unknown constraint kind " + kind);
    }

    Certificate certificate(const json& st)
    {
        Certificate cert;
        for (const auto& c : st.at("constraints")) cert.constraints.push_back(constraint(c));
        for (const auto& m : st.at("multipliers")) cert.multipliers.push_back(jlog(m));
        if (st.contains("expect_bound")) cert.claimed_bound = jlog(st.at("expect_bound"));
        return cert;
    }

    bool report_certificate(const json& st, const Certificate& cert, const CertificateCheck& chk, json& out)
    {
        out["bound"] = loglin_json(chk.bound);
        out["valid"] = chk.valid;
        json sl = json::object();
        for (int f = 2; f <= s_; ++f) sl[std::to_string(f)] = loglin_json(chk.slack[f - 2]);
        out["slack"] = sl;
        out["zero_slack"] = chk.zero_slack;
        json cs = json::array();
        for (size_t i = 0; i < cert.constraints.size(); ++i)
            cs.push_back({{"constraint", constraint_json(cert.constraints[i])}, {"multiplier", cert.multipliers[i].str()}});
        out["terms"] = cs;
        bool ok = chk.valid && chk.claimed_matches;
        if (!chk.claimed_matches) out["bound_mismatch"] = cert.claimed_bound->str();
        if (st.contains("expect_zero_slack")) {
            auto want = st.at("expect_zero_slack").get<std::vector<int>>();
            if (want != chk.zero_slack) ok = false;
        }
        return ok;
    }

    void emit(const json& st, LinearConstraint c)
    {
        std::string name = st.at("emit").get<std::string>();
        c.name = name;
        named_[name] = c;
        system_.push_back(c);
    }

    bool dispatch(const json& st, json& out)
    {
        std::string op = st.at("op").get<std::string>();
        if (op == "existential") {
            Certificate cert = certificate(st);
            size_t pi = st.at("probe").get<size_t>();
            if (pi >= cert.constraints.size()) throw PipelineError("probe index out of range");
            auto chk = verify_certificate(cert, s_);
            bool ok = report_certificate(st, cert, chk, out);
            out["candidate"] = loglin_json(candidate_);
            std::vector<LinearConstraint> known = system_;
            auto e = derive_existential_constraint(known, candidate_, cert.constraints[pi], cert);
            emit(st, e);
            out["emitted"] = constraint_json(named_.at(st.at("emit").get<std::string>()));
            return ok;
        }
        if (op == "certificate") {
            Certificate cert = certificate(st);
            auto chk = verify_certificate(cert, s_);
            bool ok = report_certificate(st, cert, chk, out);
            if (st.contains("below")) {
                LogLinear lim = jlog(st.at("below"));
                ok = ok && loglin_compare(chk.bound, lim) < 0;
            }
            return ok;
        }
        if (op == "bridge") {
            bool ok = rb_bridge_check(jrat(st.at("sum_lower")), jrat(st.at("cap")), st.at("pairs").get<int>(),
                                      jrat(st.at("b")));
            out["holds"] = ok;
            Rational margin = jrat(st.at("sum_lower")) - Rational(st.at("pairs").get<int>() - 2) * jrat(st.at("cap")) -
                              jrat(st.at("b"));
            out["margin"] = margin.get_str();
            return ok;
        }
        if (op == "rb_lemma") {
            RBParams pr{jrat(st.at("a")), jrat(st.at("b"))};
            auto rr = region_disjointness_check(pr, jrat(st.at("step")));
            out["strategy"] = rr.strategy;
            out["log"] = rr.analytic_log;
            out["grid_points"] = rr.grid_points;
            out["disjoint"] = rr.disjoint;
            if (!rr.disjoint) return false;
            emit(st, pair_union_constraint(s_, pr.a));
            out["emitted"] = constraint_json(named_.at(st.at("emit").get<std::string>()));
            return true;
        }
        if (op == "tight_multipliers") {
            auto cs = st.at("constraints");
            auto f = st.at("f").get<std::vector<int>>();
            if (cs.size() != 2 || f.size() != 2) throw PipelineError("tight_multipliers needs two constraints and two f");
            auto m = tight_multipliers(constraint(cs[0]), constraint(cs[1]), f[0], f[1]);
            if (!m) {
                out["singular"] = true;
                return false;
            }
            out["multipliers"] = {m->first.str(), m->second.str()};
            bool ok = true;
            if (st.contains("expect")) {
                auto e = st.at("expect");
                ok = jlog(e[0]) == m->first && jlog(e[1]) == m->second;
            }
            return ok;
        }
        if (op == "lp_float") {
            auto res = solve_lp_float(system_, s_);
            if (res.status != LpStatus::optimal) {
                out["status"] = res.status == LpStatus::infeasible ? "infeasible" : "unbounded";
                out["farkas"] = res.farkas;
                return false;
            }
            out["d"] = res.d;
            out["value"] = res.value;
            out["constraints"] = system_.size();
            bool ok = true;
            double tol = 1e-9;
            if (st.contains("expect_d")) {
                auto e = st.at("expect_d");
                for (size_t i = 0; i < res.d.size(); ++i)
                    if (std::abs(res.d[i] - jrat(e.at(i)).get_d()) > tol) ok = false;
            }
            if (st.contains("expect_value") && std::abs(res.value - jlog(st.at("expect_value")).to_double()) > tol)
                ok = false;
            return ok;
        }
        if (op == "realization") {
            auto cols = st.at("columns").get<std::vector<int>>();
            auto h = normalize(sylvester(3));
            auto p = pattern_from_columns(h, cols);
            auto a = uniform_weights(p.r());
            auto d = density_vector(p, a);
            LogLinear q = q_value(p, a);
            json dj = json::array();
            for (const auto& x : d) dj.push_back(x.get_str());
            out["d"] = dj;
            out["q"] = q.str();
            bool ok = validate_pattern(p, k_, 2);
            if (st.contains("expect_d")) {
                auto e = st.at("expect_d");
                for (size_t i = 0; i < d.size(); ++i)
                    if (d[i] != jrat(e.at(i))) ok = false;
            }
            if (st.contains("expect_q") && !(jlog(st.at("expect_q")) == q)) ok = false;
            json cut = json::array();
            for (const auto& c : system_)
                if (!c.satisfied_by(d)) cut.push_back(c.name);
            out["violated"] = cut;
            return ok && cut.empty();
        }
        throw PipelineError("unknown pipeline op " + op);
    }

    json spec_;
    KVector k_;
    int s_ = 0;
    LogLinear candidate_;
    std::vector<LinearConstraint> system_;
    std::map<std::string, LinearConstraint> named_;
};

} // namespace detail

inline PipelineReport run_pipeline(const json& spec) { return detail::PipelineRunner(spec).run(); }

inline PipelineReport run_pipeline_text(const std::string& text)
{
    json spec;
    try {
        spec = json::parse(text);
    } catch (const json::parse_error& e) {
        throw PipelineError(std::string("pipeline file is not valid JSON: ") + e.what());
    }
    return run_pipeline(spec);
}

} // namespace erlab
