#include "robin/exact.hpp"

#include <cctype>
#include <sstream>

namespace robin {

namespace {

std::string strip(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<Q> parse_coeff_list(const std::string& body) {
    std::string s = strip(body);
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
        throw validation_error("ParseError", "expected [..] coefficient list, got '" + body + "'");
    s = s.substr(1, s.size() - 2);
    std::vector<Q> out;
    if (strip(s).empty()) return out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
    return out;
}

std::string coeff_list(const QPoly& p) {
    std::string s = "[";
    const auto& c = p.coeffs();
    if (c.empty()) s += "0";
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (k) s += ",";
        s += to_string(c[k]);
    }
    return s + "]";
}

}  // namespace

Q parse_rational(const std::string& raw) {
    std::string s = strip(raw);
    if (s.empty()) throw validation_error("ParseError", "empty rational");
    if (s.front() == '+') s.erase(0, 1);
    for (char ch : s)
        if (!(std::isdigit(static_cast<unsigned char>(ch)) || ch == '-' || ch == '/'))
            throw validation_error("ParseError", "not a rational: '" + raw + "'");
    Q q;
    if (q.set_str(s, 10) != 0) throw validation_error("ParseError", "not a rational: '" + raw + "'");
    if (sgn(q.get_den()) == 0) throw validation_error("ParseError", "zero denominator: '" + raw + "'");
    q.canonicalize();
    return q;
}

std::string to_string(const Q& q) { return q.get_str(10); }

QI parse_gaussian(const std::string& raw) {
    auto comma = raw.find(',');
    if (comma == std::string::npos) return QI(parse_rational(raw));
    return QI(parse_rational(raw.substr(0, comma)), parse_rational(raw.substr(comma + 1)));
}

std::string to_string(const QI& z) {
    if (sgn(z.im) == 0) return to_string(z.re);
    return to_string(z.re) + "," + to_string(z.im);
}

std::string to_string(const QRat& r) {
    return "num:" + coeff_list(r.num()) + ";den:" + coeff_list(r.den());
}

QRat parse_ratfunc(const std::string& raw) {
    std::string s = strip(raw);
    auto semi = s.find(';');
    std::string nump = strip(semi == std::string::npos ? s : s.substr(0, semi));
    std::string denp = semi == std::string::npos ? "den:[1]" : strip(s.substr(semi + 1));
    if (nump.rfind("num:", 0) != 0 || denp.rfind("den:", 0) != 0) {
        // Bare rational shorthand, e.g. "1/2".
        if (semi == std::string::npos && nump.find('[') == std::string::npos)
            return QRat(parse_rational(nump));
        throw validation_error("ParseError", "expected num:[..];den:[..], got '" + raw + "'");
    }
    QPoly num(parse_coeff_list(nump.substr(4)));
    QPoly den(parse_coeff_list(denp.substr(4)));
    if (den.is_zero_poly()) throw validation_error("ParseError", "zero denominator in '" + raw + "'");
    return QRat(num, den);
}

}  // namespace robin
