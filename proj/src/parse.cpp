#include "orbitlab/parse.hpp"

#include <cmath>

namespace orbitlab {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_real(const std::string& raw) {
    const std::string s = trim(raw);
    std::size_t used = 0;
    double v;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw InvalidInput("not a real number: '" + raw + "'");
    }
    if (used != s.size()) throw InvalidInput("not a real number: '" + raw + "'");
    return v;
}

cplx parse_complex(const std::string& raw) {
    std::string s;
    for (char ch : raw)
        if (ch != ' ' && ch != '\t') s += ch;
    if (s.empty()) throw InvalidInput("empty complex literal");
    if (s.back() != 'i' && s.back() != 'j') return {parse_real(s), 0.0};
    s.pop_back();
    std::size_t split_at = std::string::npos;
    for (std::size_t p = s.size(); p-- > 1;) {
        if ((s[p] == '+' || s[p] == '-') && s[p - 1] != 'e' && s[p - 1] != 'E') {
            split_at = p;
            break;
        }
    }
    auto imag_part = [&](const std::string& t) {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        return parse_real(t);
    };
    try {
        if (split_at == std::string::npos) return {0.0, imag_part(s)};
        return {parse_real(s.substr(0, split_at)), imag_part(s.substr(split_at))};
    } catch (const InvalidInput&) {
        throw InvalidInput("not a complex number: '" + raw + "'");
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace orbitlab
