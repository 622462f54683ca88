// curtainlab: curtains, L-separation metrics, and the curtain model on
// concrete CAT(0) model spaces.

#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "curtainlab/experiments.hpp"
#include "curtainlab/hyperbolicity.hpp"
#include "curtainlab/morse.hpp"
#include "curtainlab/scenario.hpp"
#include "curtainlab/version.hpp"

using namespace curtainlab;

namespace {

struct CommonOpts {
    std::string space_kind = "plane";
    std::string space_params = "{}";
    std::uint64_t seed = 0;
    std::size_t pool_size = 20000;
    int lmax = 64;
    std::string out_dir = "out";
    bool check = false;
    int jobs = 1;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--space", o.space_kind, "space kind: plane|h2|tripod|tree|strip|figure2");
    cmd->add_option("--space-params", o.space_params, "space params as JSON");
    cmd->add_option("--seed", o.seed, "64-bit master seed")->default_val(0);
    cmd->add_option("--pool-size", o.pool_size, "pool cap");
    cmd->add_option("--lmax", o.lmax, "d-hat truncation index");
    cmd->add_option("--out-dir", o.out_dir, "output directory");
    cmd->add_flag("--check", o.check, "exit 3 when acceptance thresholds are violated");
    cmd->add_option("--jobs", o.jobs, "worker bound (outputs are order-independent)");
}

int run_synthesized(const CommonOpts& o, const std::string& experiment_name,
                    const std::string& experiment_params, const std::string& kappa) {
    std::ostringstream doc;
    doc << "{\"space\":{\"kind\":\"" << o.space_kind << "\",\"params\":" << o.space_params
        << "},";
    if (!kappa.empty()) {
        auto colon = kappa.find(':');
        std::string fam = colon == std::string::npos ? kappa : kappa.substr(0, colon);
        std::string par = colon == std::string::npos ? "1" : kappa.substr(colon + 1);
        doc << "\"kappa\":{\"family\":\"" << fam << "\",\"param\":" << par << "},";
    }
    doc << "\"pool\":{\"density\":0.5,\"cap\":" << o.pool_size << "},";
    doc << "\"experiment\":{\"name\":\"" << experiment_name
        << "\",\"params\":" << experiment_params << "},";
    doc << "\"seed\":" << o.seed << ",\"out_dir\":\"" << o.out_dir << "\"}";
    ScenarioOutcome out = run_scenario_text(doc.str(), {}, o.check);
    if (out.exit_code != 0) std::cerr << out.message << "\n";
    return out.exit_code;
}

std::string num_list_json(const std::string& csv, const char* key) {
    std::ostringstream os;
    os << "{\"" << key << "\":[" << csv << "]}";
    return os.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"curtain machinery on CAT(0) model spaces"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "execute a scenario file");
    std::string scenario_path;
    bool run_check = false;
    std::map<std::string, std::string> overrides;
    std::string run_seed, run_out;
    run->add_option("scenario", scenario_path, "scenario .scn (JSON)")->required();
    run->add_flag("--check", run_check, "exit 3 on threshold violation");
    run->add_option("--seed", run_seed, "override scenario seed");
    run->add_option("--out-dir", run_out, "override scenario out_dir");

    // dist
    auto* dist = app.add_subcommand("dist", "distance between two points");
    CommonOpts dist_o;
    std::string dist_p, dist_q;
    add_common(dist, dist_o);
    dist->add_option("--p", dist_p)->required();
    dist->add_option("--q", dist_q)->required();

    // dhat
    auto* dh = app.add_subcommand("dhat", "curtain-model distance bounds");
    CommonOpts dh_o;
    std::string dh_p, dh_q;
    double dh_extent = 40;
    add_common(dh, dh_o);
    dh->add_option("--p", dh_p)->required();
    dh->add_option("--q", dh_q)->required();
    dh->add_option("--extent", dh_extent, "probe extent");

    // kchain
    auto* kc = app.add_subcommand("kchain", "build a kappa-chain along the probe axis");
    CommonOpts kc_o;
    std::string kc_kappa = "const:1", kc_D = "auto";
    double kc_len = 400;
    add_common(kc, kc_o);
    kc->add_option("--kappa", kc_kappa, "const:c | log:p | power:a");
    kc->add_option("--D", kc_D, "contraction constant or 'auto'");
    kc->add_option("--length", kc_len);

    // deltascan
    auto* ds = app.add_subcommand("deltascan", "four-point delta over sampled quadruples");
    CommonOpts ds_o;
    std::string ds_metric = "ambient", ds_windows = "10,20,40";
    int ds_quads = 2000, ds_L = 2;
    double ds_maxdelta = -1;
    add_common(ds, ds_o);
    ds->add_option("--metric", ds_metric, "ambient|d_L|dhat");
    ds->add_option("--windows", ds_windows);
    ds->add_option("--quadruples", ds_quads);
    ds->add_option("--L", ds_L);
    ds->add_option("--max-delta", ds_maxdelta, "check threshold");

    // gridscan
    auto* gs = app.add_subcommand("gridscan", "curtain grid search over window pencils");
    CommonOpts gs_o;
    std::string gs_windows = "10,20,40";
    add_common(gs, gs_o);
    gs->add_option("--windows", gs_windows);

    // shadow
    auto* sh = app.add_subcommand("shadow", "persistent shadow fit along the probe axis");
    CommonOpts sh_o;
    std::string sh_kappa = "const:1";
    double sh_len = 200;
    add_common(sh, sh_o);
    sh->add_option("--kappa", sh_kappa);
    sh->add_option("--length", sh_len);

    // injectivity
    auto* in = app.add_subcommand("injectivity", "gromov products along two probe rays");
    CommonOpts in_o;
    std::string in_depths = "2,4,6,8";
    add_common(in, in_o);
    in->add_option("--depths", in_depths);

    // example51
    auto* ex = app.add_subcommand("example51", "strip-table chain counts");
    CommonOpts ex_o;
    int ex_imax = 6, ex_lmax = 8;
    double ex_H = 64;
    add_common(ex, ex_o);
    ex->add_option("--imax", ex_imax);
    ex->add_option("--table-lmax", ex_lmax);
    ex->add_option("--H", ex_H);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            if (!run_seed.empty()) overrides["seed"] = run_seed;
            if (!run_out.empty()) overrides["out_dir"] = run_out;
            ScenarioOutcome out = run_scenario_file(scenario_path, overrides, run_check);
            if (out.exit_code != 0) std::cerr << out.message << "\n";
            return out.exit_code;
        }
        if (*dist) {
            SpaceHandle h = make_space(dist_o.space_kind, dist_o.space_params);
            Point p = parse_point(h, dist_p), q = parse_point(h, dist_q);
            std::printf("%.12g\n", h.space->dist(p, q));
            return 0;
        }
        if (*dh) {
            SpaceHandle h = make_space(dh_o.space_kind, dh_o.space_params);
            Point p = parse_point(h, dh_p), q = parse_point(h, dh_q);
            CurtainPool pool = make_preset_pool(h, 0.5, dh_o.pool_size, dh_extent, dh_o.lmax);
            SeparationContext ctx(pool);
            DhatResult r = dhat(ctx, p, q, dh_o.lmax);
            std::printf("lower %.12g upper %.12g (pool %llu, L_max %d, tail %.3g)\n",
                        r.lower.value, r.upper.value, (unsigned long long)r.lower.pool_id,
                        dh_o.lmax, r.upper.tail);
            return 0;
        }
        if (*kc) {
            std::ostringstream params;
            params << "{\"D\":\"" << kc_D << "\",\"length\":" << kc_len << "}";
            return run_synthesized(kc_o, "kchain", params.str(), kc_kappa);
        }
        if (*ds) {
            std::ostringstream params;
            params << "{\"metric\":\"" << ds_metric << "\",\"windows\":[" << ds_windows
                   << "],\"quadruples\":" << ds_quads << ",\"L\":" << ds_L;
            if (ds_maxdelta >= 0) params << ",\"check_max_delta\":" << ds_maxdelta;
            params << "}";
            return run_synthesized(ds_o, "deltascan", params.str(), "");
        }
        if (*gs) return run_synthesized(gs_o, "gridscan", num_list_json(gs_windows, "windows"), "");
        if (*sh) {
            std::ostringstream params;
            params << "{\"length\":" << sh_len << ",\"lmax\":" << sh_o.lmax << "}";
            return run_synthesized(sh_o, "shadow", params.str(), sh_kappa);
        }
        if (*in) return run_synthesized(in_o, "injectivity", num_list_json(in_depths, "depths"), "");
        if (*ex) {
            std::ostringstream params;
            params << "{\"i_max\":" << ex_imax << ",\"L_max\":" << ex_lmax << ",\"H\":" << ex_H
                   << "}";
            return run_synthesized(ex_o, "example51", params.str(), "");
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
