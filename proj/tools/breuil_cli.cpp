// SPDX-License-Identifier: Apache-2.0
//
// Batch front end: reads a JSON job description, dispatches to the library
// and reports the checks. Exit code 0 when every check passes, 1 when some
// check fails, 2 on malformed input or inadmissible parameters.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "breuil/json_io.hpp"

using namespace breuil;

namespace {

struct Output {
    std::string command;
    json params;
    Report report;
    json data = json::object();
};

void print_output(const Output& out, bool as_json) {
    if (as_json) {
        json j;
        j["command"] = out.command;
        j["params"] = out.params;
        j["checks"] = to_json(out.report);
        j["data"] = out.data;
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::cout << "command: " << out.command << "\n";
    for (const auto& c : out.report.checks) {
        std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name;
        if (!c.witness.empty()) std::cout << " -- " << c.witness;
        std::cout << "\n";
    }
    if (!out.data.empty()) std::cout << "data: " << out.data.dump() << "\n";
    std::cout << (out.report.all_pass()
                      ? "all checks passed"
                      : std::to_string(out.report.fail_count()) + " check(s) failed")
              << "\n";
}

json load_jobfile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidParams("cannot open jobfile: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& ex) {
        throw InvalidParams(std::string("jobfile is not valid JSON: ") + ex.what());
    }
    return j;
}

const RingParams* job_params(const json& job, int64_t trunc_override) {
    if (!job.contains("params")) throw InvalidParams("jobfile must contain \"params\"");
    return params_from_json(job["params"], trunc_override);
}

SimpleObject job_simple(const RingParams* ring, const json& job) {
    if (!job.contains("simple"))
        throw InvalidParams("jobfile must contain a \"simple\" payload for this command");
    return simple_from_json(ring, job["simple"]);
}

TildeModule job_module(const RingParams* ring, const json& job) {
    if (job.contains("module")) return tilde_module_from_json(ring, job["module"]);
    if (job.contains("simple")) return make_simple(job_simple(ring, job));
    throw InvalidParams("jobfile must contain a \"module\" or \"simple\" payload");
}

std::vector<std::vector<int64_t>> weight_tuples(int64_t er, int64_t d) {
    std::vector<std::vector<int64_t>> out{{}};
    for (int64_t i = 0; i < d; ++i) {
        std::vector<std::vector<int64_t>> next;
        for (const auto& t : out)
            for (int64_t n = 0; n <= er; ++n) {
                auto t2 = t;
                t2.push_back(n);
                next.push_back(t2);
            }
        out = next;
    }
    return out;
}

Output run_validate(const json& job, int64_t trunc) {
    Output out;
    out.command = "validate";
    const RingParams* ring = job_params(job, trunc);
    out.params = params_to_json(ring);
    if (job.contains("s1module")) {
        S1Module m = s1_module_from_json(ring, job["s1module"]);
        out.report = validate(m);
        out.data["kind"] = "s1module";
        out.data["d"] = m.d;
    } else {
        TildeModule m = job_module(ring, job);
        out.report = validate(m);
        out.data["kind"] = "module";
        out.data["d"] = m.d;
    }
    return out;
}

Output run_adapted_basis(const json& job, int64_t trunc) {
    Output out;
    out.command = "adapted-basis";
    const RingParams* ring = job_params(job, trunc);
    out.params = params_to_json(ring);
    TildeModule m = job_module(ring, job);
    AdaptedBasis ab;
    out.report = adapted_basis_report(m, &ab);
    out.data["weights"] = ab.weights;
    json cols = json::array();
    for (const auto& col : ab.basis_cols) {
        json c = json::array();
        for (const auto& comp : col) c.push_back(to_json(comp));
        cols.push_back(c);
    }
    out.data["basis_change"] = cols;
    return out;
}

Output run_weights(const json& job, int64_t trunc) {
    Output out;
    out.command = "weights";
    const RingParams* ring = job_params(job, trunc);
    out.params = params_to_json(ring);
    SimpleObject s = job_simple(ring, job);
    WeightData wd = weight_exponents(s);
    out.report = weight_identity_report(s);
    out.data["s"] = wd.s;
    out.data["t"] = wd.t;
    out.data["m"] = wd.m;
    out.data["v"] = wd.v;
    return out;
}

Output run_character(const json& job, int64_t trunc) {
    Output out;
    out.command = "character";
    const RingParams* ring = job_params(job, trunc);
    out.params = params_to_json(ring);
    SimpleObject s = job_simple(ring, job);
    CharacterInfo info = character_of_simple(s);
    for (const auto& c : weight_identity_report(s).checks)
        if (c.name == "digits_are_cyclic_weights") out.report.checks.push_back(c);
    out.data["level"] = info.chi.h;
    out.data["exponent"] = info.chi.exponent;
    out.data["digits"] = info.chi.digits;
    out.data["frobenius_orbit"] = info.frobenius_orbit;
    out.data["group"] = info.group;
    return out;
}

Output run_serre_check(const json& job, int64_t trunc) {
    Output out;
    out.command = "serre-check";
    const RingParams* ring = job_params(job, trunc);
    out.params = params_to_json(ring);
    TameCharacter chi;
    if (job.contains("character")) {
        const json& c = job["character"];
        chi = make_tame_character(ring->p(),
                                  c.contains("h") ? c["h"].get<int64_t>() : 1,
                                  c.contains("exponent") ? c["exponent"].get<int64_t>() : 0);
    } else {
        chi = character_of_simple(job_simple(ring, job)).chi;
    }
    SerreReport sr = serre_check(chi, ring->e, ring->r);
    out.report.add("serre_bound", sr.ok, "digits within [0, er]");
    out.data["digits"] = sr.digits;
    out.data["bound"] = sr.bound;
    out.data["exponent"] = chi.exponent;
    return out;
}

Output run_pairing_check(const json& job, int64_t trunc) {
    Output out;
    out.command = "pairing-check";
    const RingParams* ring = job_params(job, trunc);
    out.params = params_to_json(ring);
    SimpleObject s = job_simple(ring, job);
    auto [sigma, rep] = verify_dual_family(s);
    out.report.merge(rep);
    out.report.merge(pairing_nondegeneracy_report(s));

    CyclicExponents ce = cyclic_exponents(s);
    const FieldParams* amb = ambient_field(ce.p, {2 * ce.d});
    out.data["signs"] = sigma;
    out.data["v"] = ce.v;
    out.data["q"] = ce.q;
    // the scanned (p-1)-th root of -1 and its field, for reproducibility
    out.data["epsilon"] = to_json(find_epsilon(amb));
    json ambient = json::array();
    for (auto c : amb->modulus) ambient.push_back(c);
    out.data["ambient_modulus"] = ambient;
    return out;
}

Output run_oracle(const json& job, int64_t trunc, bool has_job,
                  const std::vector<std::string>& grid) {
    Output out;
    out.command = "oracle";
    if (!grid.empty()) {
        int64_t pmax = 5, dmax = 2;
        for (const auto& kv : grid) {
            auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw InvalidParams("grid arguments must look like pmax=5 dmax=2");
            std::string key = kv.substr(0, eq);
            int64_t val = std::stoll(kv.substr(eq + 1));
            if (key == "pmax")
                pmax = val;
            else if (key == "dmax")
                dmax = val;
            else
                throw InvalidParams("unknown grid key \"" + key + "\"");
        }
        out.params = json{{"pmax", pmax}, {"dmax", dmax}};
        int64_t configs = 0;
        for (int64_t p = 3; p <= pmax; ++p) {
            if (!is_prime(p)) continue;
            for (int64_t e = 1; e <= p - 2; ++e)
                for (int64_t r = 1; e * r <= p - 2; ++r) {
                    std::vector<int64_t> eis(static_cast<size_t>(e) + 1, 0);
                    eis[0] = -p;
                    eis[static_cast<size_t>(e)] = 1;
                    const RingParams* ring = RingParams::get(FieldParams::get(p, 1), e, r, eis);
                    for (int64_t d = 1; d <= dmax; ++d) {
                        bool ok = true;
                        std::string witness;
                        for (const auto& w : weight_tuples(e * r, d)) {
                            SimpleObject s = SimpleObject::cyclic_simple(ring, w);
                            Report r1 = verify_solution_family(s);
                            auto [sigma, r2] = verify_dual_family(s);
                            Report r3 = verify_pairing_identity(s);
                            if (!r1.all_pass() || !r2.all_pass() || !r3.all_pass()) {
                                ok = false;
                                witness = "weights ";
                                for (int64_t n : w) witness += std::to_string(n) + " ";
                                break;
                            }
                            ++configs;
                        }
                        out.report.add("oracle p=" + std::to_string(p) + " e=" + std::to_string(e) +
                                           " r=" + std::to_string(r) + " d=" + std::to_string(d),
                                       ok, witness);
                    }
                }
        }
        out.data["weight_tuples_checked"] = configs;
        return out;
    }
    if (!has_job) throw InvalidParams("oracle needs a jobfile or --grid");
    const RingParams* ring = job_params(job, trunc);
    out.params = params_to_json(ring);
    SimpleObject s = job_simple(ring, job);
    out.report.merge(verify_solution_family(s));
    auto [sigma, rep] = verify_dual_family(s);
    out.report.merge(rep);
    out.report.merge(verify_pairing_identity(s));
    out.data["signs"] = sigma;
    CyclicExponents ce = cyclic_exponents(s);
    const FieldParams* amb = ambient_field(ce.p, {2 * ce.d});
    out.data["epsilon"] = to_json(find_epsilon(amb));
    json ambient = json::array();
    for (auto c : amb->modulus) ambient.push_back(c);
    out.data["ambient_modulus"] = ambient;
    return out;
}

Output run_lift_check(const json& job, int64_t trunc) {
    Output out;
    out.command = "lift-check";
    const RingParams* ring = job_params(job, trunc);
    out.params = params_to_json(ring);
    if (job.contains("morphism")) {
        // morphism-pair payload: lift the given map between two objects
        const json& mj = job["morphism"];
        if (!mj.contains("source_simple") || !mj.contains("target_simple") || !mj.contains("matrix"))
            throw InvalidParams(
                "\"morphism\" payload needs \"source_simple\", \"target_simple\" and \"matrix\"");
        TildeModule src = make_simple(simple_from_json(ring, mj["source_simple"]));
        TildeModule tgt = make_simple(simple_from_json(ring, mj["target_simple"]));
        S1Module lsrc = lift_object(src), ltgt = lift_object(tgt);
        TildeMorphism f;
        f.source = functor_T(lsrc);
        f.target = functor_T(ltgt);
        if (!mj["matrix"].is_array() || mj["matrix"].size() != static_cast<size_t>(src.d))
            throw InvalidParams("\"matrix\" must have one column per source basis vector");
        for (const auto& col : mj["matrix"]) {
            TVec v;
            for (const auto& comp : col) v.push_back(tilde_elem_from_json(ring, comp));
            if (v.size() != static_cast<size_t>(tgt.d))
                throw InvalidParams("morphism column has wrong target rank");
            f.mat_cols.push_back(v);
        }
        out.report.add("input_is_morphism", check_morphism(f).all_pass(), "");
        auto cols = lift_morphism(lsrc, ltgt, f); // exactness asserted inside
        bool reduces = true;
        for (int64_t k = 0; k < src.d; ++k)
            if (!(svec_project(cols[static_cast<size_t>(k)]) == f.mat_cols[static_cast<size_t>(k)]))
                reduces = false;
        out.report.add("lift_reduces_to_input", reduces, "");
        out.report.add("lift_commutation_exact", true, "asserted during the lift");
        return out;
    }
    TildeModule m = job_module(ring, job);
    Report val = validate(m);
    out.report.add("input_valid", val.all_pass(), "");

    S1Module lifted = lift_object(m);
    out.report.add("lift_valid", validate(lifted).all_pass(), "");

    TildeModule back = functor_T(lifted);
    bool weights_ok = adapted_basis(back).weights == adapted_basis(m).weights;
    out.report.add("round_trip_weights", weights_ok, "");
    out.report.add("round_trip_rank", back.d == m.d, "");
    {
        AdaptedBasis ab = adapted_basis(m);
        TildeMorphism iso;
        iso.source = back;
        iso.target = m;
        iso.mat_cols = ab.basis_cols;
        TildeMorphism inv;
        inv.source = m;
        inv.target = back;
        inv.mat_cols = tilde_matrix_inverse(ring, ab.basis_cols);
        out.report.add("round_trip_isomorphism",
                       check_morphism(iso).all_pass() && check_morphism(inv).all_pass(), "");
    }

    bool scalars_ok = true;
    for (int64_t lam = 0; lam < ring->p() && scalars_ok; ++lam) {
        auto f = scalar_morphism(back, FieldElem(ring->field, lam));
        auto cols = lift_morphism(lifted, lifted, f);
        for (int64_t k = 0; k < m.d; ++k)
            if (!(cols[static_cast<size_t>(k)] ==
                  svec_scale_field(svec_basis(ring, m.d, k), FieldElem(ring->field, lam))))
                scalars_ok = false;
    }
    out.report.add("scalar_morphisms_lift_exactly", scalars_ok, "");
    out.data["weights"] = adapted_basis(m).weights;
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact computations with mod-p Breuil modules"};
    app.require_subcommand(1);

    std::string jobfile;
    bool as_json = false;
    int64_t trunc = 0;
    std::vector<std::string> grid;

    auto add_common = [&](CLI::App* cmd, bool job_required) {
        auto* opt = cmd->add_option("jobfile", jobfile, "JSON job description");
        if (job_required) opt->required();
        cmd->add_flag("--json", as_json, "machine-readable report");
        cmd->add_option("--trunc-degree", trunc, "override the u-degree truncation (default 2p^2)");
    };

    for (const char* name : {"validate", "adapted-basis", "weights", "character", "serre-check",
                             "pairing-check", "lift-check"})
        add_common(app.add_subcommand(name), true);
    {
        auto* cmd = app.add_subcommand("oracle");
        add_common(cmd, false);
        cmd->add_option("--grid", grid, "run the admissible grid, e.g. --grid pmax=5 dmax=2");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        CLI::App* sub = app.get_subcommands().front();
        const std::string name = sub->get_name();
        json job;
        if (!jobfile.empty()) job = load_jobfile(jobfile);

        Output out;
        if (name == "validate")
            out = run_validate(job, trunc);
        else if (name == "adapted-basis")
            out = run_adapted_basis(job, trunc);
        else if (name == "weights")
            out = run_weights(job, trunc);
        else if (name == "character")
            out = run_character(job, trunc);
        else if (name == "serre-check")
            out = run_serre_check(job, trunc);
        else if (name == "pairing-check")
            out = run_pairing_check(job, trunc);
        else if (name == "oracle")
            out = run_oracle(job, trunc, !jobfile.empty(), grid);
        else if (name == "lift-check")
            out = run_lift_check(job, trunc);

        print_output(out, as_json);
        return out.report.all_pass() ? 0 : 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
