#include "neron/expr.hpp"

#include <cctype>

namespace neron {

namespace {

struct Token {
    enum class Kind { Number, Ident, Plus, Minus, Star, Caret, LParen, RParen, End };
    Kind kind;
    std::string text;
    int line;
    int col;
};

class Lexer {
  public:
    explicit Lexer(const std::string& s) : s_(s) { advance(); }

    const Token& peek() const { return tok_; }

    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

    [[noreturn]] void error(const std::string& msg) const {
        fail(ErrorKind::ParseError, msg + " at line " + std::to_string(tok_.line) + ", column " +
                                        std::to_string(tok_.col));
    }

  private:
    void advance() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) bump();
        tok_.line = line_;
        tok_.col = col_;
        if (pos_ >= s_.size()) {
            tok_ = {Token::Kind::End, "", line_, col_};
            return;
        }
        char c = s_[pos_];
        auto single = [&](Token::Kind k) {
            tok_ = {k, std::string(1, c), line_, col_};
            bump();
        };
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string num;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                num += s_[pos_];
                bump();
            }
            // rational literal p/q: the slash binds to the literal only
            if (pos_ < s_.size() && s_[pos_] == '/') {
                std::size_t save = pos_;
                int sl = line_, sc = col_;
                bump();
                if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                    num += '/';
                    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                        num += s_[pos_];
                        bump();
                    }
                } else {
                    pos_ = save;
                    line_ = sl;
                    col_ = sc;
                }
            }
            tok_ = {Token::Kind::Number, num, tok_.line, tok_.col};
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string id;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
                id += s_[pos_];
                bump();
            }
            tok_ = {Token::Kind::Ident, id, tok_.line, tok_.col};
            return;
        }
        switch (c) {
            case '+': single(Token::Kind::Plus); return;
            case '-': single(Token::Kind::Minus); return;
            // U+2212 minus sign, as used in pretty-printed input
            case '\xe2':
                if (pos_ + 3 <= s_.size() && s_.compare(pos_, 3, "\xe2\x88\x92") == 0) {
                    tok_ = {Token::Kind::Minus, "-", line_, col_};
                    bump();
                    bump();
                    bump();
                    return;
                }
                break;
            case '*': single(Token::Kind::Star); return;
            case '^': single(Token::Kind::Caret); return;
            case '(': single(Token::Kind::LParen); return;
            case ')': single(Token::Kind::RParen); return;
            default: break;
        }
        fail(ErrorKind::ParseError, std::string("unexpected character '") + c + "' at line " +
                                        std::to_string(line_) + ", column " + std::to_string(col_));
    }

    void bump() {
        if (s_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    const std::string& s_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    Token tok_{Token::Kind::End, "", 1, 1};
};

std::uint32_t parse_exponent(Lexer& lx) {
    if (lx.peek().kind != Token::Kind::Number) lx.error("expected exponent");
    Token t = lx.take();
    if (t.text.find('/') != std::string::npos)
        fail(ErrorKind::ParseError, "exponent must be a positive integer at line " +
                                        std::to_string(t.line) + ", column " +
                                        std::to_string(t.col));
    unsigned long v = std::stoul(t.text);
    return static_cast<std::uint32_t>(v);
}

// ---- polynomial grammar ----

class PolyParser {
  public:
    PolyParser(const std::string& text, const VarTablePtr& table, MonomialOrder order)
        : lx_(text), table_(table), order_(order) {}

    Polynomial parse() {
        Polynomial p = expr();
        if (lx_.peek().kind != Token::Kind::End) lx_.error("trailing input");
        return p;
    }

  private:
    Polynomial expr() {
        bool neg = false;
        while (lx_.peek().kind == Token::Kind::Plus || lx_.peek().kind == Token::Kind::Minus) {
            if (lx_.take().kind == Token::Kind::Minus) neg = !neg;
        }
        Polynomial acc = term();
        if (neg) acc = -acc;
        while (lx_.peek().kind == Token::Kind::Plus || lx_.peek().kind == Token::Kind::Minus) {
            bool minus = lx_.take().kind == Token::Kind::Minus;
            Polynomial t = term();
            acc = minus ? acc - t : acc + t;
        }
        return acc;
    }

    Polynomial term() {
        Polynomial acc = factor();
        while (lx_.peek().kind == Token::Kind::Star) {
            lx_.take();
            acc = acc * factor();
        }
        return acc;
    }

    Polynomial factor() {
        Polynomial a = atom();
        if (lx_.peek().kind == Token::Kind::Caret) {
            lx_.take();
            a = a.pow(parse_exponent(lx_));
        }
        return a;
    }

    Polynomial atom() {
        const Token& t = lx_.peek();
        switch (t.kind) {
            case Token::Kind::Number: {
                Token n = lx_.take();
                return Polynomial::constant(table_, rat_parse(n.text), order_);
            }
            case Token::Kind::Ident: {
                Token id = lx_.take();
                if (!table_->has(id.text))
                    fail(ErrorKind::UnknownVariable, "unknown identifier '" + id.text +
                                                         "' at line " + std::to_string(id.line) +
                                                         ", column " + std::to_string(id.col));
                return Polynomial::variable(table_, table_->index(id.text), 1, order_);
            }
            case Token::Kind::LParen: {
                lx_.take();
                Polynomial p = expr();
                if (lx_.peek().kind != Token::Kind::RParen) lx_.error("expected ')'");
                lx_.take();
                return p;
            }
            default: lx_.error("expected a number, variable, or '('");
        }
    }

    Lexer lx_;
    VarTablePtr table_;
    MonomialOrder order_;
};

// ---- series grammar ----

class SeriesParser {
  public:
    SeriesParser(const std::string& text, std::size_t precision) : lx_(text), n_(precision) {}

    TruncatedSeries parse() {
        TruncatedSeries s = expr();
        if (lx_.peek().kind != Token::Kind::End) lx_.error("trailing input");
        return s;
    }

  private:
    TruncatedSeries expr() {
        bool neg = false;
        while (lx_.peek().kind == Token::Kind::Plus || lx_.peek().kind == Token::Kind::Minus) {
            if (lx_.take().kind == Token::Kind::Minus) neg = !neg;
        }
        TruncatedSeries acc = term();
        if (neg) acc = series_scale(acc, Rat(-1));
        while (lx_.peek().kind == Token::Kind::Plus || lx_.peek().kind == Token::Kind::Minus) {
            bool minus = lx_.take().kind == Token::Kind::Minus;
            TruncatedSeries t = term();
            acc = minus ? series_sub(acc, t) : series_add(acc, t);
        }
        return acc;
    }

    TruncatedSeries term() {
        TruncatedSeries acc = factor();
        while (lx_.peek().kind == Token::Kind::Star) {
            lx_.take();
            acc = series_mul(acc, factor());
        }
        return acc;
    }

    TruncatedSeries factor() {
        TruncatedSeries a = atom();
        if (lx_.peek().kind == Token::Kind::Caret) {
            lx_.take();
            std::uint32_t e = parse_exponent(lx_);
            TruncatedSeries r(n_);
            r.at(0) = 1;
            TruncatedSeries base = a;
            while (e) {
                if (e & 1) r = series_mul(r, base);
                e >>= 1;
                if (e) base = series_mul(base, base);
            }
            return r;
        }
        return a;
    }

    TruncatedSeries atom() {
        const Token& t = lx_.peek();
        if (t.kind == Token::Kind::Number) {
            Token n = lx_.take();
            TruncatedSeries s(n_);
            s.at(0) = rat_parse(n.text);
            return s;
        }
        if (t.kind == Token::Kind::LParen) {
            lx_.take();
            TruncatedSeries s = expr();
            expect_rparen();
            return s;
        }
        if (t.kind == Token::Kind::Ident) {
            Token id = lx_.take();
            if (id.text == "x") {
                TruncatedSeries s(n_);
                if (n_ > 1) s.at(1) = 1;
                return s;
            }
            if (id.text == "EXP") return series_exp(n_);
            if (id.text == "FACT") return series_fact(n_);
            if (id.text == "inv" || id.text == "sqrt") {
                if (lx_.peek().kind != Token::Kind::LParen) lx_.error("expected '('");
                lx_.take();
                TruncatedSeries s = expr();
                expect_rparen();
                return id.text == "inv" ? series_inverse(s) : series_sqrt(s);
            }
            fail(ErrorKind::ParseError, "unknown series identifier '" + id.text + "' at line " +
                                            std::to_string(id.line) + ", column " +
                                            std::to_string(id.col));
        }
        lx_.error("expected a number, 'x', 'EXP', 'FACT', 'inv', 'sqrt', or '('");
    }

    void expect_rparen() {
        if (lx_.peek().kind != Token::Kind::RParen) lx_.error("expected ')'");
        lx_.take();
    }

    Lexer lx_;
    std::size_t n_;
};

} // namespace

Polynomial parse_polynomial(const std::string& text, const VarTablePtr& table,
                            MonomialOrder order) {
    return PolyParser(text, table, order).parse();
}

TruncatedSeries eval_series_expr(const std::string& text, std::size_t precision) {
    if (precision == 0) fail(ErrorKind::Validation, "series precision must be positive");
    return SeriesParser(text, precision).parse();
}

} // namespace neron
