// SPDX-License-Identifier: Apache-2.0
//
// mimome: secrecy capacity toolkit for Gaussian MIMO wiretap channels
// Copyright (C) 2026 The mimome Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

// Command-line front end. run() parses argv, dispatches to one subcommand and
// returns the process exit status:
//
//   0  success
//   1  input error (bad flags, unreadable or malformed files, domain errors)
//   2  solver did not converge
//   3  certificate failed

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mimome/asymptotics.hpp"
#include "mimome/certify.hpp"
#include "mimome/channel.hpp"
#include "mimome/saddle.hpp"
#include "mimome/spectral.hpp"

#ifndef MIMOME_VERSION
#define MIMOME_VERSION "1.0.0"
#endif

namespace mimome::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kNonConvergence = 2, kCertificationFailure = 3 };

struct RunManifest {
    std::string command;
    std::vector<std::string> args;
    std::optional<std::uint64_t> seed;
    std::string version = MIMOME_VERSION;
    double duration_s = 0.0;

    std::string joined_args() const
    {
        std::string s;
        for (std::size_t i = 0; i < args.size(); ++i)
            s += (i ? " " : "") + args[i];
        return s;
    }

    std::string seed_text() const { return seed ? std::to_string(*seed) : "none"; }

    // Single line appended to stdout reports.
    std::string line() const
    {
        char dur[32];
        std::snprintf(dur, sizeof dur, "%.6f", duration_s);
        return "manifest command=" + command + " args=\"" + joined_args() + "\" seed=" + seed_text() +
               " version=" + version + " duration_s=" + dur;
    }

    nlohmann::json to_json() const
    {
        return {{"command", command}, {"args", args},        {"seed", seed ? nlohmann::json(*seed) : nullptr},
                {"version", version}, {"duration_s", duration_s}};
    }

    // Sidecar written next to file artifacts as <path>.manifest.
    void write_sidecar(const std::string &artifact) const
    {
        const std::string path = artifact + ".manifest";
        std::ofstream f(path);
        if (!f)
            throw IoError("cannot write manifest '" + path + "'");
        char dur[32];
        std::snprintf(dur, sizeof dur, "%.6f", duration_s);
        f << "command=" << command << '\n'
          << "args=" << joined_args() << '\n'
          << "seed=" << seed_text() << '\n'
          << "version=" << version << '\n'
          << "duration_s=" << dur << '\n';
        if (!f)
            throw IoError("write failed for '" + path + "'");
    }
};

// "a:b:n" -> n points from a to b inclusive; a single number is a one-point grid.
inline std::vector<double> parse_grid(const std::string &spec)
{
    auto num = [&spec](const std::string &t) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(t, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used == 0 || used != t.size() || !std::isfinite(v))
            throw DomainError("malformed grid '" + spec + "', expected a:b:n");
        return v;
    };
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ':');)
        parts.push_back(p);
    if (parts.size() == 1)
        return {num(parts[0])};
    if (parts.size() != 3)
        throw DomainError("malformed grid '" + spec + "', expected a:b:n");
    const double a = num(parts[0]), b = num(parts[1]), nd = num(parts[2]);
    if (nd < 1.0 || nd != std::floor(nd) || nd > 1e6)
        throw DomainError("grid '" + spec + "': n must be a positive integer");
    const auto n = static_cast<std::size_t>(nd);
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    if (n > 1)
        g.back() = b;
    return g;
}

inline unsigned threads_from_env()
{
    const char *v = std::getenv("MIMOME_THREADS");
    if (!v || !*v)
        return 0;
    char *end = nullptr;
    const long n = std::strtol(v, &end, 10);
    if (*end != '\0' || n < 0 || n > 4096)
        throw DomainError(std::string("MIMOME_THREADS must be a nonnegative integer, got '") + v + "'");
    return static_cast<unsigned>(n);
}

namespace detail {

inline std::string fixed6(double v)
{
    if (std::abs(v) < 5e-7)
        v = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

inline std::string sci(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6e", v);
    return buf;
}

inline std::string g6(double v)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct Options {
    std::string channel;
    double power = 0.0;
    double tol = 1e-7;
    int max_iters = 20000;
    bool bits = false;
    bool json = false;
    bool csv = false;
    std::string beta, gamma, out;
    long long ne = 0, nt = 0, nr = 0;
    long long trials = 0;
    std::uint64_t seed = 0;
};

inline SolverConfig solver_config(const Options &o)
{
    SolverConfig cfg;
    cfg.tol_gap = o.tol;
    cfg.tol_residual = 0.1 * o.tol;
    cfg.max_iters = o.max_iters;
    return cfg;
}

inline int cmd_capacity(const Options &o, std::ostream &out)
{
    const auto pair = read_channel_file(o.channel);
    const auto r = solve(pair, PowerBudget(o.power), solver_config(o));
    const double scale = o.bits ? 1.0 / std::log(2.0) : 1.0;
    const char *unit = o.bits ? "bits" : "nats";
    const double cap = r.capacity_nats * scale;
    const int code = r.status == SolveStatus::IterationCap ? kNonConvergence : kOk;
    if (o.json) {
        nlohmann::json j = {{"capacity", std::abs(cap) < 5e-7 ? 0.0 : cap},
                            {"unit", unit},
                            {"status", to_string(r.status)},
                            {"iterations", r.iterations},
                            {"final_gap", r.final_gap}};
        out << j.dump() << '\n';
        return code;
    }
    out << "capacity=" << fixed6(cap) << ' ' << unit << '\n'
        << "status=" << to_string(r.status) << '\n'
        << "iterations=" << r.iterations << '\n'
        << "final_gap=" << sci(r.final_gap) << '\n';
    return code;
}

inline int cmd_certify(const Options &o, std::ostream &out)
{
    const auto pair = read_channel_file(o.channel);
    const auto r = solve(pair, PowerBudget(o.power), solver_config(o));
    const auto c = certify(pair, r);
    if (o.csv) {
        write_certificate_csv_header(out);
        write_certificate_csv_row(out, c);
    } else {
        out << "status=" << to_string(r.status) << '\n' << "capacity_nats=" << fixed6(r.capacity_nats) << '\n';
        write_certificate_kv(out, c);
    }
    return c.passed ? kOk : kCertificationFailure;
}

inline int cmd_zerocap(const Options &o, std::ostream &out)
{
    const auto rep = zero_capacity_test(read_channel_file(o.channel));
    out << "sigma=" << g6(rep.sigma_max_gen.as_double()) << " zero_capacity=" << (rep.capacity_zero ? "true" : "false")
        << " margin=" << g6(rep.margin) << '\n';
    return kOk;
}

inline int cmd_phase(const Options &o, std::ostream &out, std::ostream &err)
{
    const auto betas = parse_grid(o.beta);
    const auto gammas = parse_grid(o.gamma);
    if (o.ne < 1 || o.trials < 1)
        throw DomainError("--ne and --trials must be positive");
    const auto pts = phase_diagram(betas, gammas, static_cast<Index>(o.ne), static_cast<std::size_t>(o.trials),
                                   o.seed, threads_from_env());
    for (const auto &p : pts)
        if (p.degenerate)
            err << "warning: beta=" << g6(p.ratios.beta) << " gamma=" << g6(p.ratios.gamma)
                << " rounds to a zero antenna count at ne=" << o.ne << "; using 1\n";
    std::ofstream f(o.out);
    if (!f)
        throw IoError("cannot write '" + o.out + "'");
    write_phase_csv(f, pts);
    if (!f)
        throw IoError("write failed for '" + o.out + "'");
    out << "points=" << pts.size() << " out=" << o.out << '\n';
    return kOk;
}

inline int cmd_allocate(std::ostream &out)
{
    const auto a = optimal_allocation();
    char buf[160];
    std::snprintf(buf, sizeof buf, "beta*=%.6f gamma*=%.6f sum=%.6f\n", a.beta_star, a.gamma_star, a.min_sum);
    out << buf;
    std::snprintf(buf, sizeof buf, "equal_split=%.6f\n", equal_split_ne_per_antenna());
    out << buf;
    std::snprintf(buf, sizeof buf, "best_nr_over_nt=%.6f ne_per_antenna=%.6f\n", a.gamma_star / a.beta_star,
                  1.0 / a.min_sum);
    out << buf;
    return kOk;
}

inline int cmd_sample(const Options &o, std::ostream &out)
{
    if (o.nt < 1 || o.nr < 1 || o.ne < 1)
        throw DomainError("--nt, --nr and --ne must be positive");
    const auto pair = sample_gaussian_pair(o.nt, o.nr, o.ne, o.seed);
    write_channel_file(pair, o.out,
                       "nt=" + std::to_string(o.nt) + " nr=" + std::to_string(o.nr) + " ne=" + std::to_string(o.ne) +
                           " seed=" + std::to_string(o.seed));
    out << "wrote " << o.out << " nt=" << o.nt << " nr=" << o.nr << " ne=" << o.ne << '\n';
    return kOk;
}

} // namespace detail

inline int run(const std::vector<std::string> &argv, std::ostream &out, std::ostream &err)
{
    using detail::Options;
    Options o;
    CLI::App app{"mimome: secrecy capacity of Gaussian MIMO wiretap channels", "mimome"};
    app.set_version_flag("--version", MIMOME_VERSION);
    app.require_subcommand(1, 1);

    auto *cap = app.add_subcommand("capacity", "Solve for the secrecy capacity");
    cap->add_option("--channel", o.channel, "Channel file")->required();
    cap->add_option("--power", o.power, "Power budget P > 0")->required();
    cap->add_option("--tol", o.tol, "Duality-gap tolerance in nats")->check(CLI::PositiveNumber);
    cap->add_option("--max-iters", o.max_iters, "Iteration cap")->check(CLI::PositiveNumber);
    cap->add_flag("--bits", o.bits, "Report in bits instead of nats");
    cap->add_flag("--json", o.json, "JSON output");

    auto *cert = app.add_subcommand("certify", "Solve and verify the optimality conditions");
    cert->add_option("--channel", o.channel, "Channel file")->required();
    cert->add_option("--power", o.power, "Power budget P > 0")->required();
    cert->add_option("--tol", o.tol, "Duality-gap tolerance of the solve")->check(CLI::PositiveNumber);
    cert->add_option("--max-iters", o.max_iters, "Iteration cap")->check(CLI::PositiveNumber);
    cert->add_flag("--csv", o.csv, "CSV output");

    auto *zc = app.add_subcommand("zerocap", "Zero-capacity test via the largest generalized singular value");
    zc->add_option("--channel", o.channel, "Channel file")->required();

    auto *ph = app.add_subcommand("phase", "Monte Carlo phase diagram over (beta, gamma)");
    ph->add_option("--beta", o.beta, "Grid a:b:n of n_t/n_e")->required();
    ph->add_option("--gamma", o.gamma, "Grid a:b:n of n_r/n_e")->required();
    ph->add_option("--ne", o.ne, "Eavesdropper antennas")->required();
    ph->add_option("--trials", o.trials, "Trials per grid point")->required();
    ph->add_option("--seed", o.seed, "Master seed")->required();
    ph->add_option("--out", o.out, "Output CSV")->required();

    auto *al = app.add_subcommand("allocate", "Antenna allocation constants");

    auto *sm = app.add_subcommand("sample", "Draw an i.i.d. CN(0,1) channel pair");
    sm->add_option("--nt", o.nt, "Transmit antennas")->required();
    sm->add_option("--nr", o.nr, "Receiver antennas")->required();
    sm->add_option("--ne", o.ne, "Eavesdropper antennas")->required();
    sm->add_option("--seed", o.seed, "Seed")->required();
    sm->add_option("--out", o.out, "Output channel file")->required();

    std::vector<const char *> cargv;
    for (const auto &a : argv)
        cargv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(cargv.size()), cargv.data());
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError &e) {
        app.exit(e, out, err);
        if ((ph->parsed() || sm->parsed()) && ph->count("--seed") + sm->count("--seed") == 0)
            err << "an explicit --seed is required: stochastic commands are reproducible only from a fixed seed\n";
        return kInputError;
    }

    RunManifest m;
    m.args.assign(argv.begin() + (argv.empty() ? 0 : 1), argv.end());
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };

    try {
        int code = kOk;
        if (cap->parsed()) {
            m.command = "capacity";
            std::ostringstream body;
            code = detail::cmd_capacity(o, body);
            m.duration_s = elapsed();
            if (o.json) {
                auto j = nlohmann::json::parse(body.str());
                j["manifest"] = m.to_json();
                out << j.dump(2) << '\n';
            } else {
                out << body.str() << m.line() << '\n';
            }
        } else if (cert->parsed()) {
            m.command = "certify";
            code = detail::cmd_certify(o, out);
            m.duration_s = elapsed();
            if (!o.csv)
                out << m.line() << '\n';
        } else if (zc->parsed()) {
            m.command = "zerocap";
            code = detail::cmd_zerocap(o, out);
            m.duration_s = elapsed();
            out << m.line() << '\n';
        } else if (ph->parsed()) {
            m.command = "phase";
            m.seed = o.seed;
            code = detail::cmd_phase(o, out, err);
            m.duration_s = elapsed();
            m.write_sidecar(o.out);
            out << m.line() << '\n';
        } else if (al->parsed()) {
            m.command = "allocate";
            code = detail::cmd_allocate(out);
            m.duration_s = elapsed();
            out << m.line() << '\n';
        } else if (sm->parsed()) {
            m.command = "sample";
            m.seed = o.seed;
            code = detail::cmd_sample(o, out);
            m.duration_s = elapsed();
            m.write_sidecar(o.out);
            out << m.line() << '\n';
        }
        return code;
    } catch (const ConvergenceFailure &e) {
        err << "error: " << e.what() << '\n';
        return kNonConvergence;
    } catch (const NumericalBreakdown &e) {
        err << "error: " << e.what() << '\n';
        return kNonConvergence;
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
}

} // namespace mimome::cli
