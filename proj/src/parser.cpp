#include <milnorkit/parser.hpp>

#include <cctype>
#include <limits>
#include <sstream>

#include <milnorkit/errors.hpp>

namespace milnorkit
{

namespace
{

class Parser
{
public:
    Parser(std::string_view text, const ContextPtr &ctx) : text_(text), ctx_(ctx) {}

    Polynomial parse()
    {
        Polynomial p = expr();
        skip_space();
        if (pos_ != text_.size()) {
            if (starts_operand()) {
                fail("expected an operator (implicit multiplication is not allowed)");
            }
            fail("expected an operator or end of input");
        }
        return p;
    }

private:
    [[noreturn]] void fail(const std::string &what) const
    {
        throw parse_error(pos_, what);
    }

    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c)
    {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    bool starts_operand()
    {
        skip_space();
        if (pos_ >= text_.size()) {
            return false;
        }
        const char c = text_[pos_];
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '(';
    }

    Polynomial expr()
    {
        Polynomial acc = term();
        while (true) {
            if (accept('+')) {
                acc += term();
            } else if (accept('-')) {
                acc -= term();
            } else {
                return acc;
            }
        }
    }

    Polynomial term()
    {
        Polynomial acc = unary();
        while (true) {
            if (accept('*')) {
                acc *= unary();
            } else if (accept('/')) {
                const std::size_t at = pos_;
                const Polynomial d = unary();
                if (d.degree() != 0 || d.is_zero()) {
                    throw parse_error(at, "divisor must be a nonzero constant");
                }
                acc *= Rational(1) / d.constant_term();
            } else {
                return acc;
            }
        }
    }

    Polynomial unary()
    {
        if (accept('-')) {
            return -unary();
        }
        if (accept('+')) {
            return unary();
        }
        return power();
    }

    Polynomial power()
    {
        Polynomial base = primary();
        if (accept('^')) {
            skip_space();
            const std::size_t at = pos_;
            if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                fail("expected a nonnegative integer exponent");
            }
            const std::string digits = read_digits();
            unsigned long long e = 0;
            for (char c : digits) {
                if (e > (std::numeric_limits<std::uint32_t>::max() - 9) / 10) {
                    throw parse_error(at, "exponent overflow");
                }
                e = e * 10 + static_cast<unsigned>(c - '0');
            }
            if (e > ctx_->degree_cap()) {
                throw parse_error(at, "exponent overflow: exceeds the degree cap");
            }
            try {
                return base.pow(static_cast<std::uint32_t>(e));
            } catch (const overflow_error &) {
                throw parse_error(at, "exponent overflow: result exceeds the degree cap");
            }
        }
        return base;
    }

    std::string read_digits()
    {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    Polynomial primary()
    {
        skip_space();
        if (pos_ >= text_.size()) {
            fail("expected a number, identifier or '('");
        }
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            mpz_class value(read_digits());
            if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                fail("expected an operator (implicit multiplication is not allowed)");
            }
            return Polynomial::constant(ctx_, Rational(value));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                ++pos_;
            }
            const std::string name(text_.substr(start, pos_ - start));
            const auto idx = ctx_->index_of(name);
            if (!idx) {
                throw parse_error(start, "unknown identifier '" + name + "'");
            }
            return Polynomial::variable(ctx_, *idx);
        }
        if (accept('(')) {
            Polynomial inner = expr();
            if (!accept(')')) {
                fail("expected ')'");
            }
            return inner;
        }
        fail("expected a number, identifier or '('");
    }

    std::string_view text_;
    const ContextPtr &ctx_;
    std::size_t pos_ = 0;
};

} // namespace

Polynomial parse_polynomial(std::string_view text, const ContextPtr &ctx)
{
    return Parser(text, ctx).parse();
}

std::string format_polynomial(const Polynomial &f)
{
    if (f.is_zero()) {
        return "0";
    }
    const auto &ctx = *f.context();
    std::ostringstream os;
    bool first = true;
    for (auto it = f.terms().rbegin(); it != f.terms().rend(); ++it) {
        const auto &[m, c] = *it;
        if (first) {
            if (c < 0) {
                os << "-";
            }
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        first = false;
        const Rational mag = abs(c);
        bool wrote = false;
        if (mag != 1 || total_degree(m) == 0) {
            os << mag.get_str();
            wrote = true;
        }
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) {
                continue;
            }
            if (wrote) {
                os << "*";
            }
            os << ctx.name(i);
            if (m[i] > 1) {
                os << "^" << m[i];
            }
            wrote = true;
        }
    }
    return os.str();
}

Series parse_series(std::string_view text, const std::string &param, int order)
{
    const auto ctx = make_context({param});
    return Series::from_polynomial(parse_polynomial(text, ctx), order);
}

} // namespace milnorkit
