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

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mimome/linalg.hpp"

namespace mimome {

/// Problem instance: receiver channel Hr (n_r x n_t) and eavesdropper
/// channel He (n_e x n_t).
class ChannelPair {
public:
    ChannelPair(ComplexMatrix Hr, ComplexMatrix He) : Hr_(std::move(Hr)), He_(std::move(He))
    {
        if (Hr_.rows() < 1 || Hr_.cols() < 1 || He_.rows() < 1 || He_.cols() < 1)
            throw DimensionMismatch("channel matrices need at least one row and one column");
        if (Hr_.cols() != He_.cols())
            throw DimensionMismatch("Hr has " + std::to_string(Hr_.cols()) + " columns but He has " +
                                    std::to_string(He_.cols()));
        require_finite(Hr_, "Hr");
        require_finite(He_, "He");
    }

    const ComplexMatrix &Hr() const noexcept { return Hr_; }
    const ComplexMatrix &He() const noexcept { return He_; }
    Index nt() const noexcept { return Hr_.cols(); }
    Index nr() const noexcept { return Hr_.rows(); }
    Index ne() const noexcept { return He_.rows(); }

    // Stacked [Hr; He].
    ComplexMatrix Ht() const
    {
        ComplexMatrix out(nr() + ne(), nt());
        out << Hr_, He_;
        return out;
    }

private:
    ComplexMatrix Hr_;
    ComplexMatrix He_;
};

/// Average transmit power budget P > 0.
class PowerBudget {
public:
    explicit PowerBudget(double p) : p_(p)
    {
        if (!std::isfinite(p) || p <= 0.0)
            throw DomainError("power budget must be finite and positive");
    }
    double value() const noexcept { return p_; }

private:
    double p_;
};

// ---------------------------------------------------------------------------
// Random ensembles
// ---------------------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Seed of the independent substream `index` under `master`. Trials seeded this
// way do not depend on the order in which they are executed.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index)
{
    return splitmix64(splitmix64(master) ^ splitmix64(index * 0xD1B54A32D192ED03ULL + 1));
}

// i.i.d. CN(0, 1) entries: real and imaginary parts each N(0, 1/2), filled
// row-major.
template <class Engine>
ComplexMatrix sample_cn_matrix(Index rows, Index cols, Engine &eng)
{
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    ComplexMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) {
            const double re = g(eng);
            const double im = g(eng);
            m(i, j) = cplx(re, im);
        }
    return m;
}

inline ChannelPair sample_gaussian_pair(Index nt, Index nr, Index ne, std::uint64_t seed)
{
    if (nt < 1 || nr < 1 || ne < 1)
        throw DomainError("antenna counts must be at least 1");
    std::mt19937_64 eng(seed);
    ComplexMatrix Hr = sample_cn_matrix(nr, nt, eng);
    ComplexMatrix He = sample_cn_matrix(ne, nt, eng);
    return ChannelPair(std::move(Hr), std::move(He));
}

// ---------------------------------------------------------------------------
// Channel file format
//
//   mimome-channel v1
//   Hr <n_r> <n_t>
//   <n_r lines of 2*n_t decimals: re im re im ...>
//   He <n_e> <n_t>
//   <n_e lines>
//
// Lines starting with '#' are ignored anywhere after the first line.
// ---------------------------------------------------------------------------

inline constexpr const char *kChannelMagic = "mimome-channel v1";

namespace detail {

inline std::string rstrip(std::string s)
{
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t'))
        s.pop_back();
    return s;
}

inline std::vector<std::string> split_ws(const std::string &s)
{
    std::istringstream is(s);
    std::vector<std::string> out;
    for (std::string tok; is >> tok;)
        out.push_back(tok);
    return out;
}

inline double parse_decimal(const std::string &tok, std::size_t line)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &used);
    } catch (const std::exception &) {
        throw ParseError(line, "not a number: '" + tok + "'");
    }
    if (used != tok.size())
        throw ParseError(line, "not a number: '" + tok + "'");
    if (!std::isfinite(v))
        throw ParseError(line, "non-finite value: '" + tok + "'");
    return v;
}

inline long parse_count(const std::string &tok, std::size_t line)
{
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(tok, &used);
    } catch (const std::exception &) {
        throw ParseError(line, "not an integer: '" + tok + "'");
    }
    if (used != tok.size() || v < 1)
        throw ParseError(line, "dimension must be a positive integer, got '" + tok + "'");
    return v;
}

struct LineReader {
    std::istream &in;
    std::size_t lineno = 0;

    // Next non-comment, non-blank line; false at end of input.
    bool next(std::string &out)
    {
        std::string raw;
        while (std::getline(in, raw)) {
            ++lineno;
            raw = rstrip(raw);
            if (raw.empty() || raw[0] == '#')
                continue;
            out = raw;
            return true;
        }
        return false;
    }
};

inline ComplexMatrix read_block(LineReader &rd, const char *name, Index expected_cols)
{
    std::string line;
    if (!rd.next(line))
        throw DimensionMismatch(std::string("missing '") + name + "' header");
    const auto hdr = split_ws(line);
    if (hdr.size() != 3 || hdr[0] != name)
        throw ParseError(rd.lineno, std::string("expected '") + name + " <rows> <cols>'");
    const Index rows = parse_count(hdr[1], rd.lineno);
    const Index cols = parse_count(hdr[2], rd.lineno);
    if (expected_cols > 0 && cols != expected_cols)
        throw DimensionMismatch(std::string(name) + " declares " + std::to_string(cols) + " columns, expected " +
                                std::to_string(expected_cols));
    ComplexMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        if (!rd.next(line))
            throw DimensionMismatch(std::string(name) + " declares " + std::to_string(rows) + " rows, found " +
                                    std::to_string(i));
        const auto toks = split_ws(line);
        if (!toks.empty() && (toks[0] == "Hr" || toks[0] == "He"))
            throw DimensionMismatch("line " + std::to_string(rd.lineno) + ": " + name + " declares " +
                                    std::to_string(rows) + " rows, found " + std::to_string(i));
        std::vector<double> vals;
        vals.reserve(toks.size());
        for (const auto &t : toks)
            vals.push_back(parse_decimal(t, rd.lineno));
        if (static_cast<Index>(vals.size()) != 2 * cols) {
            throw DimensionMismatch("line " + std::to_string(rd.lineno) + ": " + name + " row " + std::to_string(i) +
                                    " has " + std::to_string(vals.size()) + " values, expected " +
                                    std::to_string(2 * cols));
        }
        for (Index j = 0; j < cols; ++j)
            m(i, j) = cplx(vals[2 * j], vals[2 * j + 1]);
    }
    return m;
}

} // namespace detail

inline ChannelPair parse_channel(std::istream &in)
{
    detail::LineReader rd{in};
    std::string first;
    if (!std::getline(in, first))
        throw ParseError(1, "empty channel file");
    rd.lineno = 1;
    if (detail::rstrip(first) != kChannelMagic)
        throw ParseError(1, std::string("expected '") + kChannelMagic + "'");

    ComplexMatrix Hr = detail::read_block(rd, "Hr", 0);
    ComplexMatrix He = detail::read_block(rd, "He", Hr.cols());
    std::string extra;
    if (rd.next(extra))
        throw ParseError(rd.lineno, "unexpected content after He block");
    return ChannelPair(std::move(Hr), std::move(He));
}

inline ChannelPair read_channel_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open channel file '" + path + "'");
    try {
        return parse_channel(in);
    } catch (const ParseError &e) {
        throw ParseError(e.line(), e.message() + " (in '" + path + "')");
    }
}

// `comment`, when nonempty, is written as a '#' line after the magic line.
inline void format_channel(std::ostream &out, const ChannelPair &pair, const std::string &comment = {})
{
    auto emit = [&out](const char *name, const ComplexMatrix &m) {
        out << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
        char buf[64];
        for (Index i = 0; i < m.rows(); ++i) {
            for (Index j = 0; j < m.cols(); ++j) {
                std::snprintf(buf, sizeof buf, "%.17g %.17g", m(i, j).real(), m(i, j).imag());
                if (j > 0)
                    out << ' ';
                out << buf;
            }
            out << '\n';
        }
    };
    out << kChannelMagic << '\n';
    if (!comment.empty())
        out << "# " << comment << '\n';
    emit("Hr", pair.Hr());
    emit("He", pair.He());
}

inline void write_channel_file(const ChannelPair &pair, const std::string &path, const std::string &comment = {})
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write channel file '" + path + "'");
    format_channel(out, pair, comment);
    if (!out)
        throw IoError("write failed for '" + path + "'");
}

} // namespace mimome
