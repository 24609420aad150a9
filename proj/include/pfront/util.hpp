#pragma once

#include <cstdint>
#include <cmath>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace pfront {

// Deterministic 64-bit generator (SplitMix64). std::random distributions are
// implementation-defined, which would break the bit-exact replay contract, so
// all randomness in the project flows through this.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0,1)
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // derive an independent stream, stable w.r.t. call order at the call site
    Rng split(std::uint64_t tag) {
        return Rng(next_u64() ^ (0x9e3779b97f4a7c15ULL * (tag + 1)));
    }

private:
    std::uint64_t state_;
};

// FNV-1a over raw bytes; used for artifact inventories.
inline std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h = 0xcbf29ce484222325ULL) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Shortest round-trip decimal form of a double. Verdict files are compared
// bit-for-bit on replay, so every double goes through this one formatter.
inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms = 0.0;  // residual rms
};

// Ordinary least squares y = a + b x.
inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_line: need >= 2 samples");
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    if (det == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
    LineFit f;
    f.slope = (n * sxy - sx * sy) / det;
    f.intercept = (sy - f.slope * sx) / n;
    double ss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        ss += r * r;
    }
    f.rms = std::sqrt(ss / static_cast<double>(n));
    return f;
}

// Monotone-preserving piecewise cubic (Fritsch-Carlson). Exact at the nodes,
// no overshoot between them.
class MonotoneCubic {
public:
    MonotoneCubic() = default;
    MonotoneCubic(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        if (n < 2 || y_.size() != n) throw std::invalid_argument("monotone cubic: need >= 2 nodes");
        std::vector<double> d(n - 1), h(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            h[i] = x_[i + 1] - x_[i];
            if (!(h[i] > 0)) throw std::invalid_argument("monotone cubic: nodes must increase");
            d[i] = (y_[i + 1] - y_[i]) / h[i];
        }
        m_.assign(n, 0.0);
        m_[0] = d[0];
        m_[n - 1] = d[n - 2];
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (d[i - 1] * d[i] <= 0.0) {
                m_[i] = 0.0;
            } else {
                const double w1 = 2.0 * h[i] + h[i - 1];
                const double w2 = h[i] + 2.0 * h[i - 1];
                m_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
            }
        }
    }

    double lo() const { return x_.front(); }
    double hi() const { return x_.back(); }

    double value(double q) const {
        const std::size_t k = panel(q);
        const double h = x_[k + 1] - x_[k];
        const double t = (q - x_[k]) / h;
        const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
        const double h10 = t * (1 - t) * (1 - t);
        const double h01 = t * t * (3 - 2 * t);
        const double h11 = t * t * (t - 1);
        return h00 * y_[k] + h * h10 * m_[k] + h01 * y_[k + 1] + h * h11 * m_[k + 1];
    }

    double deriv(double q) const {
        const std::size_t k = panel(q);
        const double h = x_[k + 1] - x_[k];
        const double t = (q - x_[k]) / h;
        const double d00 = 6 * t * (t - 1) / h;
        const double d10 = (1 - t) * (1 - 3 * t);
        const double d01 = -6 * t * (t - 1) / h;
        const double d11 = t * (3 * t - 2);
        return d00 * y_[k] + d10 * m_[k] + d01 * y_[k + 1] + d11 * m_[k + 1];
    }

    std::size_t panel(double q) const {
        if (x_.empty()) throw std::invalid_argument("monotone cubic: empty");
        std::size_t lo = 0, hi = x_.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            (x_[mid] <= q ? lo : hi) = mid;
        }
        return lo;
    }

private:
    std::vector<double> x_, y_, m_;
};

// Static row-block parallel for. Deterministic: the work decomposition depends
// only on (n, threads), never on scheduling.
inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t, std::size_t)>& body) {
    if (threads <= 1 || n < 2) {
        body(0, n);
        return;
    }
    const std::size_t nt = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    std::vector<std::thread> pool;
    pool.reserve(nt);
    const std::size_t chunk = (n + nt - 1) / nt;
    for (std::size_t t = 0; t < nt; ++t) {
        const std::size_t lo = t * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

}  // namespace pfront
