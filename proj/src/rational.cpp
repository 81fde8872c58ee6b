#include "probound/rational.hpp"

#include <cctype>

namespace probound {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace

std::optional<Rat> parse_rat(std::string_view text) {
    bool neg = false;
    if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
        neg = text.front() == '-';
        text.remove_prefix(1);
    }
    if (text.empty()) return std::nullopt;

    Rat value;
    auto slash = text.find('/');
    auto dot = text.find('.');
    if (slash != std::string_view::npos) {
        auto num = text.substr(0, slash);
        auto den = text.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) return std::nullopt;
        Int d(std::string(den), 10);
        if (d == 0) return std::nullopt;
        value = Rat(Int(std::string(num), 10), d);
        value.canonicalize();
    } else if (dot != std::string_view::npos) {
        auto ip = text.substr(0, dot);
        auto fp = text.substr(dot + 1);
        if (ip.empty() && fp.empty()) return std::nullopt;
        if (!ip.empty() && !all_digits(ip)) return std::nullopt;
        if (!fp.empty() && !all_digits(fp)) return std::nullopt;
        Int scale(1);
        for (std::size_t i = 0; i < fp.size(); ++i) scale *= 10;
        Int units = ip.empty() ? Int(0) : Int(std::string(ip), 10);
        Int frac = fp.empty() ? Int(0) : Int(std::string(fp), 10);
        value = Rat(units * scale + frac, scale);
        value.canonicalize();
    } else {
        if (!all_digits(text)) return std::nullopt;
        value = Rat(Int(std::string(text), 10));
    }
    if (neg) value = -value;
    return value;
}

std::string rat_str(const Rat& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

double rat_double(const Rat& q) { return q.get_d(); }

}  // namespace probound
