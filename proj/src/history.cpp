#include "caus/history.hpp"

#include <stdexcept>

namespace caus {

EventSet History::dom() const {
    EventSet s = 0;
    for (int e = 0; e < kMaxEvents; ++e)
        if (v[e] != kUndef) s |= EventSet(1) << e;
    return s;
}

History History::restrict(EventSet s) const {
    History h;
    for (int e = 0; e < kMaxEvents; ++e)
        if ((s >> e) & 1u) h.v[e] = v[e];
    return h;
}

bool operator<(const History& a, const History& b) {
    int sa = a.size(), sb = b.size();
    if (sa != sb) return sa < sb;
    return a.v < b.v;
}

bool compatible(const History& a, const History& b) {
    for (int e = 0; e < kMaxEvents; ++e)
        if (a.v[e] != kUndef && b.v[e] != kUndef && a.v[e] != b.v[e]) return false;
    return true;
}

History join(const History& a, const History& b) {
    History h = a;
    for (int e = 0; e < kMaxEvents; ++e) {
        if (b.v[e] == kUndef) continue;
        if (h.v[e] != kUndef && h.v[e] != b.v[e]) throw std::invalid_argument("join of incompatible histories");
        h.v[e] = b.v[e];
    }
    return h;
}

bool leq(const History& a, const History& b) {
    for (int e = 0; e < kMaxEvents; ++e)
        if (a.v[e] != kUndef && a.v[e] != b.v[e]) return false;
    return true;
}

History make_history(std::initializer_list<std::pair<int, int>> items) {
    History h;
    for (auto [e, x] : items) h.set(e, x);
    return h;
}

std::string to_string(const History& h, const std::vector<std::string>& names) {
    std::string s = "{";
    bool first = true;
    for (int e = 0; e < kMaxEvents; ++e) {
        if (!h.defined(e)) continue;
        if (!first) s += ",";
        first = false;
        s += (e < static_cast<int>(names.size()) ? names[e] : "e" + std::to_string(e)) + ":" + std::to_string(h[e]);
    }
    return s + "}";
}

std::string to_code(const History& h, int n) {
    std::string s;
    for (int e = 0; e < n; ++e) s += h.defined(e) ? std::to_string(h[e]) : "_";
    return s;
}

History from_code(const std::string& code) {
    if (code.size() > kMaxEvents) throw std::invalid_argument("history code too long");
    History h;
    for (std::size_t e = 0; e < code.size(); ++e) {
        char c = code[e];
        if (c == '_') continue;
        if (c < '0' || c > '9') throw std::invalid_argument("bad history code: " + code);
        h.set(static_cast<int>(e), c - '0');
    }
    return h;
}

}  // namespace caus
