#pragma once

#include <compare>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace mevni {

using Amount = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

Rational make_rational(const Amount& num, const Amount& den);
std::string to_string(const Amount& a);
// Integers render bare, fractions as "num/den".
std::string to_string(const Rational& r);
// Accepts "7", "-3", "9/4".
Rational parse_rational(const std::string& text);

struct Token {
    std::string symbol;
    auto operator<=>(const Token&) const = default;
};

enum class AccountKind { user, contract };

struct AccountId {
    AccountKind kind = AccountKind::user;
    std::string name;

    static AccountId user(std::string n) { return {AccountKind::user, std::move(n)}; }
    static AccountId contract(std::string n) { return {AccountKind::contract, std::move(n)}; }
    bool is_user() const { return kind == AccountKind::user; }
    bool is_contract() const { return kind == AccountKind::contract; }
    auto operator<=>(const AccountId&) const = default;
};

std::string to_string(const AccountId& a);

class TypeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Null {
    auto operator<=>(const Null&) const = default;
};

// Scalar carried in stores, arguments and return values. Rationals with
// denominator 1 are normalized to integers so equality is structural.
class Value {
public:
    using Tuple = std::vector<Value>;
    using Storage = std::variant<Null, bool, Amount, Rational, Token, AccountId, Tuple>;

    Value() = default;

    static Value null() { return Value(); }
    static Value boolean(bool b);
    static Value integer(Amount a);
    static Value integer(long long a) { return integer(Amount(a)); }
    static Value rational(const Rational& r);
    static Value token(Token t);
    static Value account(AccountId a);
    static Value tuple(Tuple items);

    bool is_null() const { return std::holds_alternative<Null>(v_); }
    bool is_bool() const { return std::holds_alternative<bool>(v_); }
    bool is_int() const { return std::holds_alternative<Amount>(v_); }
    bool is_rational() const { return std::holds_alternative<Rational>(v_); }
    bool is_numeric() const { return is_int() || is_rational(); }
    bool is_token() const { return std::holds_alternative<Token>(v_); }
    bool is_account() const { return std::holds_alternative<AccountId>(v_); }
    bool is_tuple() const { return std::holds_alternative<Tuple>(v_); }

    bool as_bool() const;
    const Amount& as_int() const;
    Rational as_rational() const;
    const Token& as_token() const;
    const AccountId& as_account() const;
    const Tuple& as_tuple() const;

    const Storage& storage() const { return v_; }
    std::string str() const;

    friend bool operator==(const Value& a, const Value& b) { return a.v_ == b.v_; }

private:
    Storage v_;
};

// Total order: by alternative, then numerically / lexicographically.
int compare(const Value& a, const Value& b);

}  // namespace mevni
