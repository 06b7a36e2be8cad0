#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "sinr/community.hpp"
#include "sinr/error.hpp"

namespace sinr {

namespace {

double entropy(const std::unordered_map<std::uint32_t, std::size_t> &counts, double n) {
    double h = 0.0;
    for (const auto &[label, c] : counts) {
        const double p = static_cast<double>(c) / n;
        h -= p * std::log(p);
    }
    return h;
}

} // namespace

double nmi(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
    if (a.size() != b.size()) throw ValidationError("nmi: labelings have different sizes");
    if (a.empty()) throw ValidationError("nmi: empty labelings");
    const double n = static_cast<double>(a.size());

    std::unordered_map<std::uint32_t, std::size_t> ca, cb;
    std::unordered_map<std::uint64_t, std::size_t> joint;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ++ca[a[i]];
        ++cb[b[i]];
        ++joint[(std::uint64_t{a[i]} << 32) | b[i]];
    }
    const double ha = entropy(ca, n);
    const double hb = entropy(cb, n);
    if (ha + hb == 0.0) return 1.0;

    double mi = 0.0;
    for (const auto &[key, c] : joint) {
        const double pab = static_cast<double>(c) / n;
        const double pa = static_cast<double>(ca[static_cast<std::uint32_t>(key >> 32)]) / n;
        const double pb = static_cast<double>(cb[static_cast<std::uint32_t>(key & 0xffffffffu)]) / n;
        mi += pab * std::log(pab / (pa * pb));
    }
    const double value = 2.0 * mi / (ha + hb);
    return std::clamp(value, 0.0, 1.0);
}

double nmi(const Partition &a, const Partition &b) { return nmi(a.assignment(), b.assignment()); }

} // namespace sinr
