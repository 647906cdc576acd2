#include "adem/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace adem {

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n == 0 ? 1 : n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

SampleError coupled_error_sample(const SdeModel& model, const SchemeSpec& family,
                                 double resolution, int ref_refinement, std::uint64_t seed,
                                 std::uint64_t path_index, double T) {
    if (ref_refinement < 2)
        throw std::invalid_argument("coupled_error_sample: ref_refinement must be at least 2");
    BrownianPath w(model.noise_dim, seed, path_index);
    const SchemeSpec coarse_spec = with_resolution(family, resolution, model, T);
    const SchemeSpec fine_spec = with_resolution(family, resolution / ref_refinement, model, T);

    const SimulatedPath coarse = simulate(model, coarse_spec, w, T);
    const SimulatedPath fine = simulate(model, fine_spec, w, T);

    SampleError s;
    s.steps = coarse.step_count;
    if (coarse.diverged || fine.diverged) {
        s.diverged = true;
        return s;
    }
    Vec diff = coarse.terminal_state();
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= fine.terminal_state()[i];
    s.err_terminal = norm(diff);
    s.err_sup = std::abs(coarse.max_knot_norm() - fine.max_knot_norm());
    return s;
}

SampleError exact_error_sample(const SdeModel& model, const SchemeSpec& family, double resolution,
                               std::uint64_t seed, std::uint64_t path_index, double T) {
    if (!model.exact_solution)
        throw std::invalid_argument("exact_error_sample: model has no closed-form solution");
    BrownianPath w(model.noise_dim, seed, path_index);
    const SchemeSpec spec = with_resolution(family, resolution, model, T);
    const SimulatedPath path = simulate(model, spec, w, T);

    SampleError s;
    s.steps = path.step_count;
    if (path.diverged) {
        s.diverged = true;
        return s;
    }
    Vec diff = path.terminal_state();
    const Vec exact_T = model.exact_solution(w, T);
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= exact_T[i];
    s.err_terminal = norm(diff);

    double sup_exact = 0.0;
    for (double t : path.times) sup_exact = std::max(sup_exact, norm(model.exact_solution(w, t)));
    s.err_sup = std::abs(path.max_knot_norm() - sup_exact);
    return s;
}

ConvergenceReport strong_error_sweep(const SdeModel& model, const SchemeSpec& family,
                                     const std::vector<double>& resolutions, std::size_t paths,
                                     std::uint64_t seed, double T, const SweepOptions& options) {
    if (resolutions.empty()) throw std::invalid_argument("strong_error_sweep: empty resolution list");
    if (paths == 0) throw std::invalid_argument("strong_error_sweep: need at least one path");

    ConvergenceReport report;
    report.paths_per_point = paths;
    report.seed = seed;

    for (double r : resolutions) {
        std::vector<SampleError> samples(paths);
        parallel_for(paths, options.threads, [&](std::size_t i) {
            samples[i] = options.reference == ErrorReference::CoupledRefinement
                             ? coupled_error_sample(model, family, r, options.ref_refinement, seed,
                                                    i, T)
                             : exact_error_sample(model, family, r, seed, i, T);
        });

        SweepRow row;
        row.resolution = r;
        std::size_t ok = 0;
        double sum_t2 = 0.0, sum_s2 = 0.0, sum_steps = 0.0;
        for (const SampleError& s : samples) {
            if (s.diverged) continue;
            ++ok;
            sum_t2 += s.err_terminal * s.err_terminal;
            sum_s2 += s.err_sup * s.err_sup;
            sum_steps += static_cast<double>(s.steps);
        }
        row.diverged_fraction = static_cast<double>(paths - ok) / static_cast<double>(paths);
        if (ok == 0) {
            row.rms_error_T = row.rms_error_sup = std::numeric_limits<double>::infinity();
            row.avg_dt = std::numeric_limits<double>::quiet_NaN();
            row.mean_steps = std::numeric_limits<double>::quiet_NaN();
        } else {
            row.rms_error_T = std::sqrt(sum_t2 / static_cast<double>(ok));
            row.rms_error_sup = std::sqrt(sum_s2 / static_cast<double>(ok));
            row.mean_steps = sum_steps / static_cast<double>(ok);
            row.avg_dt = T / row.mean_steps;
        }
        report.rows.push_back(row);
    }

    std::sort(report.rows.begin(), report.rows.end(),
              [](const SweepRow& a, const SweepRow& b) { return a.avg_dt < b.avg_dt; });

    std::vector<double> dts, errs_t, errs_sup;
    for (const SweepRow& row : report.rows) {
        if (!std::isfinite(row.avg_dt) || row.avg_dt <= 0.0) continue;
        if (std::isfinite(row.rms_error_T) && row.rms_error_T > 0.0 &&
            std::isfinite(row.rms_error_sup) && row.rms_error_sup > 0.0) {
            dts.push_back(row.avg_dt);
            errs_t.push_back(row.rms_error_T);
            errs_sup.push_back(row.rms_error_sup);
        }
    }
    if (dts.size() >= 2) {
        report.fitted_order_T = fit_order(dts, errs_t);
        report.fitted_order_sup = fit_order(dts, errs_sup);
    }
    return report;
}

double fit_order(std::span<const double> avg_dt, std::span<const double> error) {
    if (avg_dt.size() != error.size() || avg_dt.size() < 2)
        throw std::invalid_argument("fit_order: need at least two matching points");
    const std::size_t n = avg_dt.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += std::log(avg_dt[i]);
        my += std::log(error[i]);
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = std::log(avg_dt[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(error[i]) - my);
    }
    return sxy / sxx;
}

MomentReport moment_sweep(const SdeModel& model, const std::vector<SchemeSpec>& schemes, double p,
                          std::size_t paths, double T, std::uint64_t seed, unsigned threads) {
    if (p < 1.0) throw std::invalid_argument("moment_sweep: p must be at least 1");
    if (schemes.empty()) throw std::invalid_argument("moment_sweep: empty scheme list");

    MomentReport report;
    report.p = p;
    report.paths = paths;
    report.seed = seed;

    for (const SchemeSpec& spec : schemes) {
        std::vector<double> values(paths, std::numeric_limits<double>::quiet_NaN());
        parallel_for(paths, threads, [&](std::size_t i) {
            BrownianPath w(model.noise_dim, seed, i);
            const SimulatedPath path = simulate(model, spec, w, T);
            if (!path.diverged) values[i] = std::pow(path.max_knot_norm(), p);
        });

        MomentRow row;
        row.scheme = scheme_kind_name(spec.kind);
        row.resolution = spec.resolution;
        std::size_t ok = 0;
        double sum = 0.0;
        for (double v : values) {
            if (std::isnan(v)) continue;
            ++ok;
            sum += v;
        }
        row.diverged_fraction = static_cast<double>(paths - ok) / static_cast<double>(paths);
        if (ok > 0) {
            row.estimate = sum / static_cast<double>(ok);
            double ss = 0.0;
            for (double v : values) {
                if (std::isnan(v)) continue;
                ss += (v - row.estimate) * (v - row.estimate);
            }
            row.std_error = ok > 1 ? std::sqrt(ss / static_cast<double>(ok - 1) /
                                               static_cast<double>(ok))
                                   : std::numeric_limits<double>::infinity();
        } else {
            row.estimate = std::numeric_limits<double>::quiet_NaN();
            row.std_error = std::numeric_limits<double>::quiet_NaN();
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

StepCountReport step_count_stats(const SdeModel& model, const std::vector<double>& deltas,
                                 std::size_t paths, double T, std::uint64_t seed,
                                 unsigned threads) {
    if (deltas.empty()) throw std::invalid_argument("step_count_stats: empty delta list");

    StepCountReport report;
    report.paths = paths;
    report.seed = seed;

    for (double delta : deltas) {
        const SchemeSpec spec = with_resolution(adaptive_em(), delta, model, T);
        std::vector<double> counts(paths, 0.0);
        parallel_for(paths, threads, [&](std::size_t i) {
            BrownianPath w(model.noise_dim, seed, i);
            counts[i] = static_cast<double>(simulate(model, spec, w, T).step_count);
        });
        StepCountRow row;
        row.delta = delta;
        row.max_steps = 0.0;
        double sum = 0.0;
        for (double c : counts) {
            sum += c;
            row.max_steps = std::max(row.max_steps, c);
        }
        row.mean_steps = sum / static_cast<double>(paths);
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace adem
