#include "mevni/value.hpp"

namespace mevni {

Rational make_rational(const Amount& num, const Amount& den) {
    if (den == 0) throw std::domain_error("division by zero");
    Rational r(num);
    r /= Rational(den);
    return r;
}

std::string to_string(const Amount& a) { return a.str(); }

std::string to_string(const Rational& r) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

Rational parse_rational(const std::string& text) {
    auto parse_int = [&](const std::string& s) {
        if (s.empty()) throw std::invalid_argument("bad rational: '" + text + "'");
        std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (i == s.size()) throw std::invalid_argument("bad rational: '" + text + "'");
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("bad rational: '" + text + "'");
        return Amount(s);
    };
    auto slash = text.find('/');
    if (slash == std::string::npos) return Rational(parse_int(text));
    Amount den = parse_int(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("bad rational: zero denominator");
    return make_rational(parse_int(text.substr(0, slash)), den);
}

std::string to_string(const AccountId& a) { return a.name; }

Value Value::boolean(bool b) {
    Value v;
    v.v_ = b;
    return v;
}

Value Value::integer(Amount a) {
    Value v;
    v.v_ = std::move(a);
    return v;
}

Value Value::rational(const Rational& r) {
    if (boost::multiprecision::denominator(r) == 1) return integer(boost::multiprecision::numerator(r));
    Value v;
    v.v_ = r;
    return v;
}

Value Value::token(Token t) {
    Value v;
    v.v_ = std::move(t);
    return v;
}

Value Value::account(AccountId a) {
    Value v;
    v.v_ = std::move(a);
    return v;
}

Value Value::tuple(Tuple items) {
    Value v;
    v.v_ = std::move(items);
    return v;
}

bool Value::as_bool() const {
    if (auto p = std::get_if<bool>(&v_)) return *p;
    throw TypeError("expected boolean, got " + str());
}

const Amount& Value::as_int() const {
    if (auto p = std::get_if<Amount>(&v_)) return *p;
    throw TypeError("expected integer, got " + str());
}

Rational Value::as_rational() const {
    if (auto p = std::get_if<Amount>(&v_)) return Rational(*p);
    if (auto p = std::get_if<Rational>(&v_)) return *p;
    throw TypeError("expected number, got " + str());
}

const Token& Value::as_token() const {
    if (auto p = std::get_if<Token>(&v_)) return *p;
    throw TypeError("expected token, got " + str());
}

const AccountId& Value::as_account() const {
    if (auto p = std::get_if<AccountId>(&v_)) return *p;
    throw TypeError("expected account, got " + str());
}

const Value::Tuple& Value::as_tuple() const {
    if (auto p = std::get_if<Tuple>(&v_)) return *p;
    throw TypeError("expected tuple, got " + str());
}

std::string Value::str() const {
    struct Printer {
        std::string operator()(const Null&) const { return "null"; }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
        std::string operator()(const Amount& a) const { return a.str(); }
        std::string operator()(const Rational& r) const { return to_string(r); }
        std::string operator()(const Token& t) const { return t.symbol; }
        std::string operator()(const AccountId& a) const { return a.name; }
        std::string operator()(const Tuple& t) const {
            std::string out = "(";
            for (std::size_t i = 0; i < t.size(); ++i) {
                if (i) out += ",";
                out += t[i].str();
            }
            return out + ")";
        }
    };
    return std::visit(Printer{}, v_);
}

namespace {
template <class T>
int cmp3(const T& a, const T& b) {
    if (a < b) return -1;
    if (b < a) return 1;
    return 0;
}
}  // namespace

int compare(const Value& a, const Value& b) {
    const auto& sa = a.storage();
    const auto& sb = b.storage();
    if (sa.index() != sb.index()) return sa.index() < sb.index() ? -1 : 1;
    switch (sa.index()) {
        case 0: return 0;
        case 1: return cmp3(std::get<bool>(sa), std::get<bool>(sb));
        case 2: return cmp3(std::get<Amount>(sa), std::get<Amount>(sb));
        case 3: return cmp3(std::get<Rational>(sa), std::get<Rational>(sb));
        case 4: return cmp3(std::get<Token>(sa), std::get<Token>(sb));
        case 5: return cmp3(std::get<AccountId>(sa), std::get<AccountId>(sb));
        default: {
            const auto& ta = std::get<Value::Tuple>(sa);
            const auto& tb = std::get<Value::Tuple>(sb);
            for (std::size_t i = 0; i < ta.size() && i < tb.size(); ++i)
                if (int c = compare(ta[i], tb[i])) return c;
            return cmp3(ta.size(), tb.size());
        }
    }
}

}  // namespace mevni
