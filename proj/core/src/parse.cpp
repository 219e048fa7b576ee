#include "planarmap/parse.hpp"

#include <cctype>
#include <sstream>

namespace planarmap {

namespace {

std::string compose_message(std::size_t pos, const std::string& msg,
                            const std::vector<std::string>& expected) {
    std::ostringstream os;
    os << "parse error at offset " << pos << ": " << msg;
    if (!expected.empty()) {
        os << " (expected ";
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (i) os << (i + 1 == expected.size() ? " or " : ", ");
            os << expected[i];
        }
        os << ")";
    }
    return os.str();
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Polynomial run() {
        skip_ws();
        if (eof()) fail("empty input", {"expression"});
        Polynomial p = expr();
        skip_ws();
        if (!eof()) fail("trailing input", {"'+'", "'-'", "'*'", "end of input"});
        return p;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(std::string msg, std::vector<std::string> expected) {
        throw ParseError(pos_, std::move(msg), std::move(expected));
    }

    bool eof() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    void skip_ws() {
        while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (!eof() && peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Polynomial expr() {
        Polynomial acc = term();
        for (;;) {
            skip_ws();
            if (accept('+')) acc = acc + term();
            else if (accept('-')) acc = acc - term();
            else return acc;
        }
    }

    Polynomial term() {
        Polynomial acc = unary();
        while (accept('*')) acc = acc * unary();
        return acc;
    }

    Polynomial unary() {
        int negations = 0;
        while (accept('-')) ++negations;
        Polynomial a = atom();
        return (negations % 2) ? -a : a;
    }

    Polynomial atom() {
        skip_ws();
        if (eof()) fail("unexpected end of input", {"'x'", "'y'", "number", "'('"});
        Polynomial base;
        const char c = peek();
        if (c == 'x') {
            ++pos_;
            base = Polynomial::variable_x();
        } else if (c == 'y') {
            ++pos_;
            base = Polynomial::variable_y();
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            base = Polynomial::constant(rational_literal());
        } else if (c == '(') {
            ++pos_;
            base = expr();
            skip_ws();
            if (!accept(')')) fail("unbalanced parentheses", {"')'"});
        } else {
            fail(std::string("unexpected character '") + c + "'", {"'x'", "'y'", "number", "'('"});
        }
        if (accept('^')) {
            skip_ws();
            if (!eof() && (peek() == '-' || peek() == '+'))
                fail("exponent must be a nonnegative integer", {"digits"});
            const long e = integer_literal("exponent");
            if (e > Polynomial::kMaxTotalDegree)
                fail("exponent exceeds degree cap " + std::to_string(Polynomial::kMaxTotalDegree),
                     {"smaller exponent"});
            base = pow(base, static_cast<int>(e));
        }
        return base;
    }

    long integer_literal(const char* what) {
        skip_ws();
        if (eof() || !std::isdigit(static_cast<unsigned char>(peek())))
            fail(std::string("missing ") + what, {"digits"});
        long v = 0;
        while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
            v = v * 10 + (peek() - '0');
            if (v > 1000000) fail(std::string(what) + " too large", {"smaller integer"});
            ++pos_;
        }
        return v;
    }

    Rational rational_literal() {
        BigInt num = big_digits();
        if (accept('/')) {
            skip_ws();
            const std::size_t den_pos = pos_;
            if (eof() || !std::isdigit(static_cast<unsigned char>(peek())))
                fail("missing denominator", {"digits"});
            BigInt den = big_digits();
            if (den == 0) {
                pos_ = den_pos;
                fail("zero denominator", {"positive integer"});
            }
            return Rational(num, den);
        }
        return Rational(num);
    }

    BigInt big_digits() {
        BigInt v = 0;
        while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
            v = v * 10 + (peek() - '0');
            ++pos_;
        }
        return v;
    }
};

std::string monomial_text(Monomial m) {
    std::string s;
    if (m.ex > 0) {
        s += "x";
        if (m.ex > 1) s += "^" + std::to_string(m.ex);
    }
    if (m.ey > 0) {
        if (!s.empty()) s += "*";
        s += "y";
        if (m.ey > 1) s += "^" + std::to_string(m.ey);
    }
    return s;
}

} // namespace

ParseError::ParseError(std::size_t position_, std::string message_, std::vector<std::string> expected_)
    : std::runtime_error(compose_message(position_, message_, expected_)),
      position(position_),
      message(std::move(message_)),
      expected(std::move(expected_)) {}

Polynomial parse(std::string_view text) { return Parser(text).run(); }

std::string format(const Polynomial& p) {
    if (p.is_zero()) return "0";
    std::string out;
    for (const auto& [m, c] : p.terms()) {
        if (!out.empty()) out += " + ";
        const std::string mono = monomial_text(m);
        if (mono.empty()) out += to_string(c);
        else if (c == 1) out += mono;
        else out += to_string(c) + "*" + mono;
    }
    return out;
}

std::string caret_line(std::size_t position) {
    return std::string(position, ' ') + "^";
}

} // namespace planarmap
