#include "dglet/catalog.hpp"
#include "dglet/static_graphlets.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstring>
#include <ostream>

namespace dglet {

BigInt count_graphlets(int n, int k) {
    if (n < 2 || k < 1) throw std::invalid_argument("count_graphlets: need n >= 2, k >= 1");
    if (k < n - 1) return 0;
    if (n == 2) return 1;
    // bottom-up over D(m, j); D(m, j) = 0 for j < m-1 stays implicit
    std::vector<std::vector<BigInt>> D(n + 1, std::vector<BigInt>(k + 1, 0));
    for (int j = 1; j <= k; j++) D[2][j] = 1;
    for (int m = 3; m <= n; m++)
        for (int j = m - 1; j <= k; j++)
            D[m][j] = (2 * m - 3) * D[m][j - 1] + (m == 3 ? 1 : 2) * D[m - 1][j - 1];
    return D[n][k];
}

BigInt count_graphlets_closed(int n, int k) {
    if (n < 3 || k < n - 1)
        throw std::invalid_argument("count_graphlets_closed: need n >= 3, k >= n-1");
    BigInt numer = 0;
    BigInt binom = 1; // C(n-2, i), updated incrementally
    for (int i = 0; i <= n - 2; i++) {
        BigInt term = binom * boost::multiprecision::pow(BigInt(2 * i + 1), (unsigned)(k - 1));
        if ((n + i) % 2 != 0) term = -term;
        numer += term;
        binom = binom * (n - 2 - i) / (i + 1);
    }
    BigInt denom = 2;
    for (int i = 2; i <= n - 2; i++) denom *= i;
    if (numer % denom != 0)
        throw std::logic_error("count_graphlets_closed: non-integral result");
    return numer / denom;
}

namespace detail {

CanonResult canonicalize_dense(const std::pair<std::uint8_t, std::uint8_t> *pairs, int k) {
    CanonResult res;
    std::int8_t labA[32], labB[32];
    std::memset(labA, -1, sizeof labA);
    std::memset(labB, -1, sizeof labB);
    PackedCode keyA = 0, keyB = 0;
    int next = 0;
    for (int i = 0; i < k; i++) {
        int x = pairs[i].first, y = pairs[i].second;
        if (i == 0) {
            labA[x] = 0; labA[y] = 1;
            labB[x] = 1; labB[y] = 0;
            next = 2;
        } else {
            if (labA[x] < 0) labA[x] = labB[x] = (std::int8_t)next++;
            if (labA[y] < 0) labA[y] = labB[y] = (std::int8_t)next++;
        }
        int a0 = labA[x], a1 = labA[y];
        if (a0 > a1) std::swap(a0, a1);
        int b0 = labB[x], b1 = labB[y];
        if (b0 > b1) std::swap(b0, b1);
        keyA = (keyA << 8) | (unsigned)(a0 << 4 | a1);
        keyB = (keyB << 8) | (unsigned)(b0 << 4 | b1);
    }
    res.n = next;
    const std::int8_t *win = (keyA <= keyB) ? labA : labB;
    res.key = (keyA <= keyB) ? keyA : keyB;
    std::memcpy(res.label, win, sizeof res.label);
    return res;
}

} // namespace detail

GraphletCode canonical_code(const std::vector<std::pair<int, int>> &chain) {
    const int k = (int)chain.size();
    if (k < 1) throw std::invalid_argument("canonical_code: empty chain");
    if (k > 16) throw CapacityError("canonical_code: chains longer than 16 events unsupported");
    // dense remap by first appearance; validate the chain property
    std::vector<int> ids;
    std::pair<std::uint8_t, std::uint8_t> dense[16];
    auto intern = [&](int id) {
        for (size_t j = 0; j < ids.size(); j++)
            if (ids[j] == id) return (int)j;
        ids.push_back(id);
        return (int)ids.size() - 1;
    };
    for (int i = 0; i < k; i++) {
        auto [x, y] = chain[i];
        if (x == y) throw std::invalid_argument("canonical_code: self-event");
        if (i > 0) {
            auto [px, py] = chain[i - 1];
            if (x != px && x != py && y != px && y != py)
                throw std::invalid_argument("canonical_code: consecutive events share no node");
        }
        int dx = intern(x), dy = intern(y);
        if (dx > 31 || dy > 31) throw CapacityError("canonical_code: too many nodes");
        dense[i] = {(std::uint8_t)dx, (std::uint8_t)dy};
    }
    auto res = detail::canonicalize_dense(dense, k);
    return unpack_code(res.key, k);
}

PackedCode pack_code(const GraphletCode &code) {
    PackedCode key = 0;
    for (auto &[a, b] : code.pairs) key = (key << 8) | (unsigned)(a << 4 | b);
    return key;
}

GraphletCode unpack_code(PackedCode key, int k) {
    GraphletCode code;
    code.k = k;
    code.pairs.resize(k);
    int maxlab = 0;
    for (int i = k - 1; i >= 0; i--) {
        unsigned byte = (unsigned)(key & 0xff);
        key >>= 8;
        code.pairs[i] = {(int)(byte >> 4), (int)(byte & 15)};
        maxlab = std::max(maxlab, code.pairs[i].second);
    }
    code.n = maxlab + 1;
    return code;
}

std::string GraphletCode::str() const {
    static const char digits[] = "0123456789abcdef";
    std::string s;
    for (size_t i = 0; i < pairs.size(); i++) {
        if (i) s += ',';
        s += digits[pairs[i].first];
        s += digits[pairs[i].second];
    }
    return s;
}

int backbone(const GraphletCode &code) {
    if (code.n > 5)
        throw std::invalid_argument("backbone: static catalog covers at most 5 nodes");
    std::vector<std::pair<int, int>> edges = code.pairs;
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return classify_static(code.n, edges);
}

int GraphletCatalog::find(const GraphletCode &code) const { return find_key(pack_code(code)); }

int GraphletCatalog::find_key(PackedCode key) const { return index_.find(key); }

int GraphletCatalog::orbit_of(const GraphletCode &code, int label) const {
    int id = find(code);
    if (id < 0) throw std::invalid_argument("orbit_of: code not in catalog");
    const CatalogEntry &e = entries_[id];
    if (label < 0 || label >= e.code.n) throw std::invalid_argument("orbit_of: label out of range");
    return e.orbit_start + (e.code.n == 2 ? 0 : label);
}

GraphletCatalog enumerate_catalog(int max_n, int max_k, std::uint64_t max_entries) {
    if (max_n < 2 || max_k < 1)
        throw std::invalid_argument("enumerate_catalog: need max_n >= 2, max_k >= 1");

    // capacity check before any allocation
    BigInt predicted = 0;
    for (int n = 2; n <= max_n; n++)
        for (int k = 1; k <= max_k; k++) predicted += count_graphlets(n, k);
    if (predicted > max_entries)
        throw CapacityError("enumerate_catalog: predicted catalog size " + predicted.str() +
                            " exceeds capacity " + std::to_string(max_entries));
    const int eff_n = std::min(max_n, max_k + 1);
    if (max_k > 16 || eff_n > 16)
        throw CapacityError("enumerate_catalog: packed codes support max_k <= 16 and <= 16 nodes");

    GraphletCatalog cat;
    cat.max_n_ = max_n;
    cat.max_k_ = max_k;

    struct LevelCode {
        PackedCode key;
        std::uint8_t n;
    };
    std::vector<std::vector<LevelCode>> levels; // per k, sorted by (n, key)
    levels.push_back({{pack_code(canonical_code({{0, 1}})), 2}});

    std::pair<std::uint8_t, std::uint8_t> chain[17];
    for (int k = 1; k < max_k; k++) {
        const auto &cur = levels[k - 1];
        std::vector<LevelCode> next;
        next.reserve(cur.size() * (size_t)(2 * std::min(max_n, k + 1) - 1));
        for (const LevelCode &parent : cur) {
            PackedCode rest = parent.key;
            for (int i = k - 1; i >= 0; i--) {
                unsigned byte = (unsigned)(rest & 0xff);
                rest >>= 8;
                chain[i] = {(std::uint8_t)(byte >> 4), (std::uint8_t)(byte & 15)};
            }
            const int n = parent.n;
            const int la = chain[k - 1].first, lb = chain[k - 1].second;
            auto emit = [&](int x, int y) {
                chain[k] = {(std::uint8_t)std::min(x, y), (std::uint8_t)std::max(x, y)};
                auto res = detail::canonicalize_dense(chain, k + 1);
                next.push_back({res.key, (std::uint8_t)res.n});
            };
            // event between a last-event endpoint and each other existing node
            for (int q = 0; q < n; q++) {
                if (q == la || q == lb) continue;
                emit(la, q);
                emit(lb, q);
            }
            // duplicate of the last event
            emit(la, lb);
            // attach a brand new node to a last-event endpoint
            if (n < max_n) {
                emit(la, n);
                emit(lb, n);
            }
        }
        // dedup; (n asc, lex asc) is also the id order within a level
        std::sort(next.begin(), next.end(), [](const LevelCode &a, const LevelCode &b) {
            if (a.n != b.n) return a.n < b.n;
            return a.key < b.key;
        });
        next.erase(std::unique(next.begin(), next.end(),
                               [](const LevelCode &a, const LevelCode &b) { return a.key == b.key; }),
                   next.end());
        levels.push_back(std::move(next));
    }

    std::size_t total = 0;
    for (const auto &lv : levels) total += lv.size();
    cat.entries_.reserve(total);
    cat.index_.build(total);

    // backbones repeat heavily across entries; cache per (n, edge bitmask)
    std::int8_t bb_memo[6][1 << 10];
    std::memset(bb_memo, -1, sizeof bb_memo);
    auto backbone_cached = [&](const GraphletCode &code) -> int {
        int mask = 0;
        for (auto &[a, b] : code.pairs) mask |= 1 << (a * 5 - a * (a + 1) / 2 + (b - a - 1));
        std::int8_t &slot = bb_memo[code.n][mask];
        if (slot < 0) slot = (std::int8_t)backbone(code);
        return slot;
    };

    // ids by (k asc, n asc, lex asc)
    for (int k = 1; k <= max_k; k++) {
        for (const LevelCode &lc : levels[k - 1]) {
            CatalogEntry e;
            e.code = unpack_code(lc.key, k);
            e.key = lc.key;
            e.orbit_count = e.code.n == 2 ? 1 : e.code.n;
            e.orbit_start = cat.total_orbits_;
            e.backbone = e.code.n <= 5 ? backbone_cached(e.code) : -1;
            cat.total_orbits_ += e.orbit_count;
            cat.index_.insert(lc.key, (int)cat.entries_.size());
            cat.entries_.push_back(std::move(e));
        }
    }
    return cat;
}

void dump_catalog(const GraphletCatalog &catalog, std::ostream &out) {
    for (int i = 0; i < catalog.size(); i++) {
        const CatalogEntry &e = catalog.entry(i);
        out << "D_" << i << ' ' << e.code.n << ' ' << e.code.k << ' ' << e.code.str() << ' '
            << e.orbit_start << '-' << (e.orbit_start + e.orbit_count - 1) << ' ';
        if (e.backbone >= 0)
            out << "G_" << e.backbone;
        else
            out << '-';
        out << '\n';
    }
}

void dump_count_table(int max_n, int max_k, std::ostream &out) {
    for (int n = 2; n <= max_n; n++)
        for (int k = 1; k <= max_k; k++) out << n << ' ' << k << ' ' << count_graphlets(n, k) << '\n';
}

} // namespace dglet
