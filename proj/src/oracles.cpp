#include "drs/oracles.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <thread>

namespace drs {

namespace {

// Best grid cell so far, scored by the fraction num/den to be minimized.
// Fractions compare by cross multiplication; all quantities are positive.
struct GridBest {
    double num = 0.0;
    double den = 1.0;
    std::int64_t i = -1;
    std::int64_t j = -1;

    bool valid() const { return i >= 0; }
    bool better_than(const GridBest& other) const {
        if (!other.valid()) return valid();
        return num * other.den < other.num * den;
    }
};

// Largest K with K * step strictly below limit.
std::int64_t last_interior(double limit, double step) {
    auto k = static_cast<std::int64_t>(limit / step);
    while (k > 0 && k * step >= limit) --k;
    while ((k + 1) * step < limit) ++k;
    return k;
}

void run_chunked(std::int64_t begin, std::int64_t end,
                 const std::function<void(std::int64_t, std::int64_t, int)>& work,
                 int num_chunks) {
    const std::int64_t span = end - begin;
    if (span <= 0) return;
    num_chunks = static_cast<int>(std::min<std::int64_t>(num_chunks, span));
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            const int chunk = next.fetch_add(1);
            if (chunk >= num_chunks) return;
            const std::int64_t lo = begin + span * chunk / num_chunks;
            const std::int64_t hi = begin + span * (chunk + 1) / num_chunks;
            work(lo, hi, chunk);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
}

double entropy_nats(const std::map<std::vector<int>, double>& dist) {
    double h = 0.0;
    for (const auto& [key, p] : dist)
        if (p > 1e-300) h -= p * std::log(p);
    return h;
}

}  // namespace

PowerSplit grid_optimal_split(const GaussianChannel& ch, int levels,
                              double resolution) {
    if (levels != 2 && levels != 3)
        throw std::invalid_argument("grid search supports 2 or 3 levels");
    const double power = ch.common_power();
    if (!(power > 0.0))
        throw std::invalid_argument("splitting requires positive power");
    if (!(resolution > 0.0) || resolution > 1e-3 * power * (1.0 + 1e-9))
        throw std::invalid_argument("resolution must be in (0, 1e-3 * P]");

    const double m = ch.num_users();
    const double h = resolution;
    const double d1 = m * power + ch.noise;
    const std::int64_t k_max = last_interior(power, h);

    // Total rate is 1/2 log of prod_k D_k / (D_k - p_k) with
    // D_{k+1} = D_k - M p_k, so the argmax minimizes
    // prod_k (D_k - p_k) / prod_{k>=2} D_k; no logs are needed.
    const int num_chunks = 128;
    std::vector<GridBest> best_per_chunk(num_chunks);
    if (levels == 2) {
        run_chunked(1, k_max + 1,
                    [&](std::int64_t lo, std::int64_t hi, int chunk) {
                        GridBest best;
                        for (std::int64_t i = lo; i < hi; ++i) {
                            const double p1 = i * h;
                            const double d2 = d1 - m * p1;
                            const double p2 = power - p1;
                            GridBest cand{(d1 - p1) * (d2 - p2), d2, i, 0};
                            if (cand.better_than(best)) best = cand;
                        }
                        best_per_chunk[chunk] = best;
                    },
                    num_chunks);
    } else {
        run_chunked(1, k_max, // need room for p2, p3
                    [&](std::int64_t lo, std::int64_t hi, int chunk) {
                        GridBest best;
                        for (std::int64_t i = lo; i < hi; ++i) {
                            const double p1 = i * h;
                            const double f1 = d1 - p1;
                            const double d2 = d1 - m * p1;
                            for (std::int64_t j = 1; j <= k_max - i; ++j) {
                                const double p2 = j * h;
                                const double d3 = d2 - m * p2;
                                const double p3 = power - p1 - p2;
                                GridBest cand{f1 * (d2 - p2) * (d3 - p3),
                                              d2 * d3, i, j};
                                if (cand.better_than(best)) best = cand;
                            }
                        }
                        best_per_chunk[chunk] = best;
                    },
                    num_chunks);
    }

    GridBest best;
    for (const GridBest& cand : best_per_chunk)
        if (cand.valid() && cand.better_than(best)) best = cand;
    if (!best.valid())
        throw std::invalid_argument("grid resolution leaves no interior point");

    PowerSplit split;
    if (levels == 2) {
        split.levels = {best.i * h, power - best.i * h};
    } else {
        split.levels = {best.i * h, best.j * h,
                        power - best.i * h - best.j * h};
    }
    return split;
}

SwitchDistribution grid_optimal_switch(const DmcChannel& ch, int levels,
                                       double resolution) {
    if (levels == 1) return uniform_switch(1);  // the simplex is a point
    if (levels != 2 && levels != 3)
        throw std::invalid_argument("grid search supports 2 or 3 switch positions");
    if (!(resolution > 0.0 && resolution <= 1.0))
        throw std::invalid_argument("resolution must be in (0, 1]");
    if (!check_assumptions(ch, 1e-9).symmetric)
        throw std::invalid_argument("switch search requires a symmetric channel");

    MutualInfoTable table(ch);
    const int m = ch.num_users();
    auto mix_at = [&](double before) {
        double c = 1.0, mix = 0.0;
        for (int l = 0; l < m; ++l) {
            // C(M-1,l) built incrementally
            mix += c * std::pow(before, l) * std::pow(1.0 - before, m - 1 - l) *
                   table.chain(l);
            c = c * (m - 1 - l) / (l + 1);
        }
        return mix;
    };
    auto total = [&](const std::vector<double>& w) {
        double before = 0.0, sum = 0.0;
        for (double lambda : w) {
            sum += lambda * mix_at(before);
            before += lambda;
        }
        return sum;
    };

    const auto k_max = static_cast<std::int64_t>(std::floor(1.0 / resolution));
    std::vector<double> best_w;
    double best_total = -1.0;
    auto consider = [&](std::vector<double> w) {
        const double t = total(w);
        if (t > best_total) {
            best_total = t;
            best_w = std::move(w);
        }
    };
    if (levels == 2) {
        for (std::int64_t i = 0; i <= k_max; ++i) {
            const double l1 = std::min(1.0, i * resolution);
            consider({l1, 1.0 - l1});
        }
    } else {
        for (std::int64_t i = 0; i <= k_max; ++i) {
            const double l1 = std::min(1.0, i * resolution);
            for (std::int64_t j = 0; j <= k_max - i; ++j) {
                const double l2 = std::min(1.0 - l1, j * resolution);
                consider({l1, l2, std::max(0.0, 1.0 - l1 - l2)});
            }
        }
    }
    SwitchDistribution sw;
    sw.weights = std::move(best_w);
    return sw;
}

double mi_entropy_oracle(const DmcChannel& ch, Subset target, Subset given) {
    const Subset full = (1u << ch.num_users()) - 1u;
    if ((target | given) & ~full)
        throw std::invalid_argument("subset references an unknown user");
    if (target & given)
        throw std::invalid_argument("target and given subsets must be disjoint");
    if (target == 0) return 0.0;

    std::map<std::vector<int>, double> dist_a, dist_b, dist_ab;
    std::vector<int> x(ch.num_users(), 0);
    int row = 0;
    for (;;) {
        double px = 1.0;
        for (int i = 0; i < ch.num_users(); ++i) px *= ch.inputs[i][x[i]];
        for (int y = 0; y < ch.output_size; ++y) {
            const double p = px * ch.transition[row][y];
            if (p <= 1e-300) continue;
            std::vector<int> a, b;
            for (int i = 0; i < ch.num_users(); ++i) {
                if (target & (1u << i)) a.push_back(x[i]);
                if (given & (1u << i)) b.push_back(x[i]);
            }
            b.push_back(y);
            std::vector<int> ab = a;
            ab.insert(ab.end(), b.begin(), b.end());
            dist_a[a] += p;
            dist_b[b] += p;
            dist_ab[ab] += p;
        }
        ++row;
        int i = ch.num_users() - 1;
        for (; i >= 0; --i) {
            if (++x[i] < ch.alphabet_sizes[i]) break;
            x[i] = 0;
        }
        if (i < 0) break;
    }
    const double info =
        entropy_nats(dist_a) + entropy_nats(dist_b) - entropy_nats(dist_ab);
    return info * unit_factor(ch.base);
}

double equal_rate_by_quadrature(const GaussianChannel& ch) {
    const double m = ch.num_users();
    const double power = ch.common_power();
    auto f = [&](double x) { return 1.0 / (m * power + ch.noise - m * x); };

    std::function<double(double, double, double, double, double, double, int)>
        simpson = [&](double a, double b, double fa, double fb, double fm,
                      double whole, int depth) -> double {
        const double mid = 0.5 * (a + b);
        const double flm = f(0.5 * (a + mid));
        const double frm = f(0.5 * (mid + b));
        const double left = (mid - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - mid) / 6.0 * (fm + 4.0 * frm + fb);
        if (depth > 50 || std::abs(left + right - whole) < 1e-15 * std::abs(whole))
            return left + right;
        return simpson(a, mid, fa, fm, flm, left, depth + 1) +
               simpson(mid, b, fm, fb, frm, right, depth + 1);
    };

    if (power == 0.0) return 0.0;
    const double fa = f(0.0), fb = f(power), fm = f(0.5 * power);
    const double whole = power / 6.0 * (fa + 4.0 * fm + fb);
    const double integral = simpson(0.0, power, fa, fb, fm, whole, 0);
    return 0.5 * integral * unit_factor(ch.base);
}

double virtual_user_info(const DmcChannel& ch,
                         const std::vector<std::vector<double>>& switch_weights,
                         UserRef target, const std::vector<UserRef>& given) {
    const int m = ch.num_users();
    if (static_cast<int>(switch_weights.size()) != m)
        throw std::invalid_argument("one switch per real user required");
    std::vector<int> counts(m);
    double work = ch.output_size;
    for (int j = 0; j < m; ++j) {
        counts[j] = static_cast<int>(switch_weights[j].size());
        if (counts[j] < 1)
            throw std::invalid_argument("switches need at least one position");
        work *= counts[j] * std::pow(static_cast<double>(ch.alphabet_sizes[j]),
                                     counts[j]);
    }
    if (work > 5e8)
        throw std::invalid_argument("super-channel enumeration too large");

    auto locate = [&](UserRef ref) {
        if (ref.owner < 1 || ref.owner > m || ref.index < 1 ||
            ref.index > counts[ref.owner - 1])
            throw std::invalid_argument("virtual user out of range");
        int offset = 0;
        for (int j = 0; j + 1 < ref.owner; ++j) offset += counts[j];
        return offset + ref.index - 1;
    };

    const int target_slot = locate(target);
    std::vector<int> given_slots, given_sizes;
    for (const UserRef& ref : given) {
        given_slots.push_back(locate(ref));
        given_sizes.push_back(ch.alphabet_sizes[ref.owner - 1]);
    }

    int total_slots = 0;
    std::vector<int> slot_size;
    for (int j = 0; j < m; ++j) {
        total_slots += counts[j];
        for (int k = 0; k < counts[j]; ++k)
            slot_size.push_back(ch.alphabet_sizes[j]);
    }
    std::vector<int> slot_owner(total_slots);
    {
        int s = 0;
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < counts[j]; ++k) slot_owner[s++] = j;
    }

    // b combines (switch tuple, given symbols, y) in mixed radix.
    int switch_space = 1;
    for (int c : counts) switch_space *= c;
    int given_space = 1;
    for (int g : given_sizes) given_space *= g;
    const int a_size = ch.alphabet_sizes[target.owner - 1];
    const int b_size = switch_space * given_space * ch.output_size;
    std::vector<double> joint(static_cast<size_t>(a_size) * b_size, 0.0);

    std::vector<int> assign(total_slots, 0);
    for (;;) {
        double px = 1.0;
        for (int s = 0; s < total_slots; ++s)
            px *= ch.inputs[slot_owner[s]][assign[s]];
        if (px > 1e-300) {
            int given_idx = 0;
            for (size_t g = 0; g < given_slots.size(); ++g)
                given_idx = given_idx * given_sizes[g] + assign[given_slots[g]];

            std::vector<int> sw(m, 0);
            for (;;) {
                double w = 1.0;
                int row = 0, sw_idx = 0, offset = 0;
                for (int j = 0; j < m; ++j) {
                    w *= switch_weights[j][sw[j]];
                    row = row * ch.alphabet_sizes[j] + assign[offset + sw[j]];
                    sw_idx = sw_idx * counts[j] + sw[j];
                    offset += counts[j];
                }
                if (w > 1e-300) {
                    const int a = assign[target_slot];
                    double* cell =
                        &joint[static_cast<size_t>(a) * b_size +
                               (static_cast<size_t>(sw_idx) * given_space +
                                given_idx) *
                                   ch.output_size];
                    const double pw = px * w;
                    for (int y = 0; y < ch.output_size; ++y)
                        cell[y] += pw * ch.transition[row][y];
                }
                int j = m - 1;
                for (; j >= 0; --j) {
                    if (++sw[j] < counts[j]) break;
                    sw[j] = 0;
                }
                if (j < 0) break;
            }
        }
        int s = total_slots - 1;
        for (; s >= 0; --s) {
            if (++assign[s] < slot_size[s]) break;
            assign[s] = 0;
        }
        if (s < 0) break;
    }

    std::vector<double> pa(a_size, 0.0), pb(b_size, 0.0);
    for (int a = 0; a < a_size; ++a)
        for (int b = 0; b < b_size; ++b) {
            const double p = joint[static_cast<size_t>(a) * b_size + b];
            pa[a] += p;
            pb[b] += p;
        }
    double info = 0.0;
    for (int a = 0; a < a_size; ++a)
        for (int b = 0; b < b_size; ++b) {
            const double p = joint[static_cast<size_t>(a) * b_size + b];
            if (p > 1e-300) info += p * std::log(p / (pa[a] * pb[b]));
        }
    return info * unit_factor(ch.base);
}

}  // namespace drs
