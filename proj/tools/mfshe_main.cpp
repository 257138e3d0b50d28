// mfshe: simulation and analysis driver. Subcommand groups:
//   run/validate/verify/report  - config-driven experiments
//   kernels eval                - print model functions on a grid as CSV
//   field sample                - write a field realization (MFSHE1 dump)
//   pam simulate|picard|fk|tails
//   fractal cover|dim|thick     - peak-set analysis
#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mfshe/acceptance.hpp"
#include "mfshe/circulant.hpp"
#include "mfshe/config.hpp"
#include "mfshe/covariance.hpp"
#include "mfshe/cover.hpp"
#include "mfshe/experiments.hpp"
#include "mfshe/feynman_kac.hpp"
#include "mfshe/field_samplers.hpp"
#include "mfshe/kernels.hpp"
#include "mfshe/pam.hpp"
#include "mfshe/peaks.hpp"
#include "mfshe/picard.hpp"

using namespace mfshe;

namespace {

struct ModelFlags {
    double alpha = 2.0, beta = 0.5, t = 1.0;
    int d = 1;
    ModelParams params() const { return ModelParams(alpha, beta, d, t); }
    void attach(CLI::App* cmd) {
        cmd->add_option("--alpha", alpha, "stability exponent in (0,2]");
        cmd->add_option("--beta", beta, "noise exponent in (0, d)");
        cmd->add_option("--d", d, "spatial dimension");
        cmd->add_option("--t", t, "time horizon");
    }
};

void set_workers(int workers) {
#ifdef _OPENMP
    if (const char* w = std::getenv("MFSHE_WORKERS"))
        workers = workers > 0 ? std::min(workers, std::atoi(w)) : std::atoi(w);
    if (workers > 0) omp_set_num_threads(workers);
#else
    (void)workers;
#endif
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"stochastic heat equation peak-structure toolkit"};
    app.require_subcommand(1);

    // --- run / validate / verify / report ---
    std::string config_path, run_dir;
    auto* run_cmd = app.add_subcommand("run", "run an experiment config");
    run_cmd->add_option("config", config_path)->required();
    auto* validate_cmd =
        app.add_subcommand("validate", "check a config without running");
    validate_cmd->add_option("config", config_path)->required();
    auto* verify_cmd = app.add_subcommand(
        "verify", "recompute a run's summary from its raw files");
    verify_cmd->add_option("run_dir", run_dir)->required();
    auto* report_cmd = app.add_subcommand("report", "print a run's summary");
    report_cmd->add_option("run_dir", run_dir)->required();

    // --- kernels eval ---
    auto* kernels_cmd = app.add_subcommand("kernels", "model functions");
    auto* keval = kernels_cmd->add_subcommand("eval", "tabulate as CSV");
    ModelFlags km;
    km.attach(keval);
    std::string fn = "density";
    double k_s = 1.0, k_from = 0.0, k_to = 10.0;
    int k_points = 101;
    keval->add_option("--fn", fn,
                      "levy|density|riesz|spectral|covariance|variance");
    keval->add_option("--s", k_s, "time for the density");
    keval->add_option("--from", k_from);
    keval->add_option("--to", k_to);
    keval->add_option("--points", k_points);

    // --- field sample ---
    auto* field_cmd = app.add_subcommand("field", "linear-equation fields");
    auto* fsample = field_cmd->add_subcommand("sample", "draw one field");
    ModelFlags fm;
    fm.attach(fsample);
    std::vector<std::int64_t> f_shape{64};
    double f_spacing = 1.0;
    std::string f_scheme = "circulant-exact", f_out = "field.mfshe";
    std::uint64_t f_seed = 1;
    std::int64_t f_block = 4096;
    fsample->add_option("--shape", f_shape, "sites per axis")->expected(-1);
    fsample->add_option("--spacing", f_spacing);
    fsample->add_option("--scheme", f_scheme,
                        "circulant-exact|spectral-torus|block-independent");
    fsample->add_option("--block", f_block, "block size for block-independent");
    fsample->add_option("--seed", f_seed);
    fsample->add_option("--out", f_out);

    // --- pam ---
    auto* pam_cmd = app.add_subcommand("pam", "parabolic Anderson model");
    ModelFlags pm;
    double p_L = 64.0, p_dt = 0.0;
    int p_grid = 512;
    std::uint64_t p_seed = 1;

    auto* psim = pam_cmd->add_subcommand("simulate", "torus simulation");
    pm.attach(psim);
    psim->add_option("--L", p_L);
    psim->add_option("--grid", p_grid);
    psim->add_option("--dt", p_dt, "0 = half the stability bound");
    psim->add_option("--seed", p_seed);
    std::int64_t p_replicas = 1;
    std::string p_out = "pam.csv", p_field_out;
    psim->add_option("--replicas", p_replicas);
    psim->add_option("--out", p_out, "CSV of final-field site values");
    psim->add_option("--field-out", p_field_out,
                     "also dump replica 0's final field as an MFSHE1 file");

    auto* ppic = pam_cmd->add_subcommand("picard", "localized iterates");
    ModelFlags pcm;
    pcm.attach(ppic);
    double pic_ell = 8.0, pic_L = 64.0, pic_dt = 0.0;
    int pic_m = 2, pic_grid = 256;
    std::uint64_t pic_seed = 1;
    ppic->add_option("--ell", pic_ell);
    ppic->add_option("--m", pic_m);
    ppic->add_option("--L", pic_L);
    ppic->add_option("--grid", pic_grid);
    ppic->add_option("--dt", pic_dt);
    ppic->add_option("--seed", pic_seed);

    auto* pfk = pam_cmd->add_subcommand("fk", "Feynman-Kac moment");
    ModelFlags fkm;
    fkm.attach(pfk);
    int fk_k = 2;
    std::int64_t fk_paths = 100000;
    double fk_dtp = 1e-3, fk_cap = 1e4;
    std::uint64_t fk_seed = 1;
    pfk->add_option("--k", fk_k);
    pfk->add_option("--paths", fk_paths);
    pfk->add_option("--dtpath", fk_dtp);
    pfk->add_option("--cap", fk_cap);
    pfk->add_option("--seed", fk_seed);

    auto* ptails = pam_cmd->add_subcommand("tails", "exceedance curve");
    ModelFlags tm;
    tm.attach(ptails);
    double tails_zmax = 6.0, tails_L = 32.0;
    int tails_grid = 128, tails_zbins = 12;
    std::int64_t tails_replicas = 20000;
    std::uint64_t tails_seed = 1;
    ptails->add_option("--zmax", tails_zmax);
    ptails->add_option("--zbins", tails_zbins);
    ptails->add_option("--replicas", tails_replicas);
    ptails->add_option("--L", tails_L);
    ptails->add_option("--grid", tails_grid);
    ptails->add_option("--seed", tails_seed);

    // --- fractal ---
    auto* fractal_cmd = app.add_subcommand("fractal", "macroscopic dimension");
    std::string fr_in;
    std::vector<double> rho_grid{0.25, 0.5, 0.75, 1.0};
    auto* fcover = fractal_cmd->add_subcommand("cover", "per-shell nu_rho");
    fcover->add_option("--in", fr_in, "MFPEAKS file")->required();
    fcover->add_option("--rho-grid", rho_grid)->expected(-1);
    std::string fr_scheme = "unit-lattice";
    fcover->add_option("--scheme", fr_scheme, "unit-lattice|greedy-dyadic");

    auto* fdim = fractal_cmd->add_subcommand("dim", "dimension estimate");
    int dim_from = 5, dim_to = 99;
    fdim->add_option("--in", fr_in, "MFPEAKS file")->required();
    fdim->add_option("--from-shell", dim_from);
    fdim->add_option("--to-shell", dim_to);

    auto* fthick = fractal_cmd->add_subcommand("thick", "theta-thickness");
    double th_theta = 0.5;
    int th_from = 5, th_to = 0;
    fthick->add_option("--in", fr_in, "MFPEAKS file")->required();
    fthick->add_option("--theta", th_theta);
    fthick->add_option("--from-shell", th_from);
    fthick->add_option("--to-shell", th_to, "0 = largest tagged shell - 1");

    CLI11_PARSE(app, argc, argv);

    try {
        set_workers(0);
        if (*run_cmd || *validate_cmd) {
            auto cfg = harness::ExperimentConfig::load(config_path);
            harness::apply_env_overrides(cfg);
            cfg.validate();
            set_workers(cfg.workers);
            if (*validate_cmd) {
                std::cout << "config ok: " << harness::kind_name(cfg.kind)
                          << " seed=" << cfg.seed << "\n";
                return 0;
            }
            const auto rec = harness::run_experiment(cfg);
            std::cout << harness::report_run(cfg.out_dir);
            for (const auto& a : rec.artifacts)
                std::cout << "wrote " << a << "\n";
            return 0;
        }
        if (*verify_cmd) {
            const auto problems = harness::verify_run(run_dir);
            if (problems.empty()) {
                std::cout << "verified: summary matches raw files\n";
                return 0;
            }
            for (const auto& p : problems) std::cout << "MISMATCH: " << p << "\n";
            return 1;
        }
        if (*report_cmd) {
            std::cout << harness::report_run(run_dir);
            return 0;
        }
        if (*keval) {
            const auto p = km.params();
            std::printf("input,value\n");
            for (int i = 0; i < k_points; ++i) {
                const double x =
                    k_from + (k_to - k_from) * i / std::max(1, k_points - 1);
                double v = 0.0;
                if (fn == "levy") v = kernels::levy_exponent({x}, p);
                else if (fn == "density")
                    v = kernels::stable_density_radial(std::fabs(x), k_s, p);
                else if (fn == "riesz")
                    v = kernels::riesz_constant(p) *
                        std::pow(std::fabs(x), -p.beta());
                else if (fn == "spectral")
                    v = x == 0.0 ? 0.0 : kernels::z_spectral_density(x, p);
                else if (fn == "covariance")
                    v = field::z_covariance_radial(std::fabs(x), p);
                else if (fn == "variance")
                    v = kernels::variance_of_z(p);
                else throw ConfigError("unknown --fn " + fn);
                std::printf("%.17g,%.17g\n", x, v);
            }
            return 0;
        }
        if (*fsample) {
            const auto p = fm.params();
            field::LatticeSpec lat;
            lat.d = p.d();
            lat.origin.assign(p.d(), 0.0);
            lat.spacing = f_spacing;
            lat.shape = f_shape;
            field::FieldSample s;
            if (f_scheme == "circulant-exact")
                s = field::sample_field_exact(lat, p, f_seed);
            else if (f_scheme == "spectral-torus")
                s = field::sample_field_spectral_torus(lat, p, f_seed);
            else if (f_scheme == "block-independent")
                s = field::sample_field_block_independent(lat, p, f_block,
                                                          f_seed);
            else throw ConfigError("unknown scheme " + f_scheme);
            field::write_field(s, f_out);
            std::cout << "wrote " << f_out << " (" << s.values.size()
                      << " sites)\n";
            return 0;
        }
        if (*psim) {
            const auto p = pm.params();
            if (p_dt <= 0.0)
                p_dt = 0.5 * pam::stability_dt_bound(p, p_L, p_grid);
            std::ofstream os(p_out);
            os << "replica,site,value\n";
            os.precision(17);
            for (std::int64_t r = 0; r < p_replicas; ++r) {
                pam::PamConfig cfg(p, p_L, p_grid, p_dt,
                                   rng::derive_seed(p_seed, r));
                const auto run = pam::simulate_pam(cfg);
                for (int i = 0; i < p_grid; ++i)
                    os << r << ',' << i << ',' << run.final_field[i] << "\n";
                if (r == 0 && !p_field_out.empty()) {
                    field::FieldSample snap;
                    snap.lattice.d = 1;
                    snap.lattice.origin = {0.0};
                    snap.lattice.spacing = cfg.spacing();
                    snap.lattice.shape = {p_grid};
                    snap.params = p;
                    snap.seed = cfg.seed;
                    snap.scheme = field::Scheme::SpectralTorus;
                    snap.values = run.final_field;
                    field::write_field(snap, p_field_out);
                }
            }
            std::cout << "wrote " << p_out << "\n";
            return 0;
        }
        if (*ppic) {
            const auto p = pcm.params();
            if (pic_dt <= 0.0)
                pic_dt = pam::stability_dt_bound(p, pic_L, pic_grid);
            pam::PamConfig cfg(p, pic_L, pic_grid, pic_dt, pic_seed);
            const pam::PicardSpec spec(pic_ell, pic_m, p);
            const std::vector<int> sites{pic_grid / 4, pic_grid / 2,
                                         3 * pic_grid / 4};
            const auto vals = pam::picard_iterate(spec, cfg, sites, pic_seed);
            std::printf("site,value\n");
            for (std::size_t i = 0; i < sites.size(); ++i)
                std::printf("%d,%.17g\n", sites[i], vals[i]);
            return 0;
        }
        if (*pfk) {
            const auto p = fkm.params();
            const auto est = pam::fk_moment(fk_k, p, fk_paths, fk_dtp, fk_cap,
                                            fk_seed);
            std::printf("k,value,stderr,n_paths,dt_path,cap,variance_warning\n");
            std::printf("%d,%.17g,%.17g,%lld,%.17g,%.17g,%d\n", est.k,
                        est.value, est.stderr_,
                        static_cast<long long>(est.n_paths), est.dt_path,
                        est.cap, est.variance_warning ? 1 : 0);
            return 0;
        }
        if (*ptails) {
            const auto p = tm.params();
            pam::PamConfig cfg(
                p, tails_L, tails_grid,
                0.5 * pam::stability_dt_bound(p, tails_L, tails_grid),
                tails_seed);
            std::vector<double> zs;
            for (int i = 0; i < tails_zbins; ++i)
                zs.push_back(tails_zmax * (i + 1) / tails_zbins);
            const auto curve = pam::tail_probability(cfg, zs, tails_replicas);
            std::printf("z,probability,stderr,censored\n");
            for (const auto& pt : curve)
                std::printf("%.17g,%.17g,%.17g,%d\n", pt.z, pt.probability,
                            pt.stderr_, pt.censored ? 1 : 0);
            return 0;
        }
        if (*fcover) {
            const auto ps = fractal::read_peaks(fr_in);
            const auto scheme = fr_scheme == "greedy-dyadic"
                                    ? fractal::CoverScheme::GreedyDyadic
                                    : fractal::CoverScheme::UnitLattice;
            const auto rep = fractal::build_cover_report(ps, rho_grid, scheme);
            std::printf("shell,occupied");
            for (double r : rho_grid) std::printf(",nu_rho_%g", r);
            std::printf("\n");
            for (const auto& row : rep.rows) {
                std::printf("%d,%lld", row.n,
                            static_cast<long long>(row.occupied));
                for (double r : rho_grid)
                    std::printf(",%.17g", row.nu.at(r));
                std::printf("\n");
            }
            return 0;
        }
        if (*fdim) {
            const auto ps = fractal::read_peaks(fr_in);
            const auto rep = fractal::build_cover_report(ps, {1.0},
                                                         fractal::CoverScheme::UnitLattice);
            const auto fit = fractal::estimate_dimension(rep, dim_from, dim_to);
            std::printf("estimate,band,shells_used\n%.17g,%.17g,%d\n",
                        fit.estimate, fit.band, fit.shells_used);
            return 0;
        }
        if (*fthick) {
            const auto ps = fractal::read_peaks(fr_in);
            int to = th_to;
            if (to <= 0 && !ps.shells.empty())
                to = ps.shells.rbegin()->first - 1;
            const auto r = fractal::is_theta_thick(ps, th_theta, th_from, to);
            if (r.thick) {
                std::printf("thick,theta=%g,from=%d,to=%d\n", th_theta,
                            th_from, to);
            } else {
                std::printf("not-thick,fail_n=%d,anchor=", r.fail_n);
                for (double c : r.fail_anchor) std::printf("%.17g ", c);
                std::printf("\n");
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
