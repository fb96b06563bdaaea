#include "twave/expression.hpp"

#include "twave/error.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>

namespace twave {

class Parser {
public:
    explicit Parser(const std::string& s) : src_(s) {}

    std::shared_ptr<const Expression::Program> run() {
        auto prog = std::make_shared<Expression::Program>();
        prog_ = prog.get();
        prog->source = src_;
        skip_ws();
        if (pos_ >= src_.size()) fail("empty expression");
        expr();
        skip_ws();
        if (pos_ < src_.size()) fail("unexpected token");
        return prog;
    }

private:
    using Op = Expression::Op;

    [[noreturn]] void fail(const std::string& msg) {
        std::string tok = pos_ < src_.size() ? std::string(1, src_[pos_]) : std::string("<end>");
        if (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) {
            std::size_t e = pos_;
            while (e < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[e])) || src_[e] == '.'))
                ++e;
            tok = src_.substr(pos_, e - pos_);
        }
        throw SyntaxError(pos_, tok,
                          msg + " at offset " + std::to_string(pos_) + " (token '" + tok + "') in \"" + src_ + "\"");
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    void emit(Op op, int delta, double v = 0.0) {
        prog_->code.push_back({op, v});
        depth_ += delta;
        if (depth_ > 0 && static_cast<std::size_t>(depth_) > prog_->max_depth)
            prog_->max_depth = static_cast<std::size_t>(depth_);
    }

    void expr() {
        term();
        for (;;) {
            if (accept('+')) {
                term();
                emit(Op::add, -1);
            } else if (accept('-')) {
                term();
                emit(Op::sub, -1);
            } else {
                return;
            }
        }
    }

    void term() {
        unary();
        for (;;) {
            if (accept('*')) {
                unary();
                emit(Op::mul, -1);
            } else if (accept('/')) {
                unary();
                emit(Op::div, -1);
            } else {
                return;
            }
        }
    }

    void unary() {
        if (accept('-')) {
            unary();
            emit(Op::neg, 0);
        } else if (accept('+')) {
            unary();
        } else {
            power();
        }
    }

    void power() {
        primary();
        if (accept('^')) {
            unary();
            emit(Op::pow, -1);
        }
    }

    void primary() {
        skip_ws();
        if (pos_ >= src_.size()) fail("unexpected end of expression");
        char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            number();
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            std::string name = src_.substr(start, pos_ - start);
            if (name == "u") {
                emit(Op::var, +1);
                return;
            }
            Op op;
            int arity = 1;
            if (name == "exp") op = Op::exp;
            else if (name == "log") op = Op::log;
            else if (name == "sqrt") op = Op::sqrt;
            else if (name == "pow") {
                op = Op::pow;
                arity = 2;
            } else {
                pos_ = start;
                fail("unknown identifier");
            }
            expect('(');
            expr();
            for (int i = 1; i < arity; ++i) {
                expect(',');
                expr();
            }
            expect(')');
            emit(op, 1 - arity);
            return;
        }
        if (accept('(')) {
            expr();
            expect(')');
            return;
        }
        fail("unexpected token");
    }

    void number() {
        const char* first = src_.data() + pos_;
        const char* last = src_.data() + src_.size();
        double v = 0.0;
        auto res = std::from_chars(first, last, v, std::chars_format::general);
        if (res.ec != std::errc()) fail("malformed number");
        pos_ += static_cast<std::size_t>(res.ptr - first);
        emit(Op::push, +1, v);
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    int depth_ = 0;
    Expression::Program* prog_ = nullptr;
};

Expression Expression::parse(const std::string& source) {
    Expression e;
    e.program_ = Parser(source).run();
    return e;
}

Expression Expression::constant(double value) {
    auto prog = std::make_shared<Program>();
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    prog->source.assign(buf, res.ptr);
    prog->code.push_back({Op::push, value});
    prog->max_depth = 1;
    Expression e;
    e.program_ = std::move(prog);
    return e;
}

namespace {

[[noreturn]] void domain_error(const char* what, double x, const std::string& src) {
    throw Error(ErrorCode::domain, std::string(what) + " of " + std::to_string(x) + " while evaluating \"" + src + "\"");
}

} // namespace

double Expression::operator()(double u) const {
    std::array<double, 64> small{};
    std::vector<double> big;
    double* st = small.data();
    if (program_->max_depth > small.size()) {
        big.resize(program_->max_depth);
        st = big.data();
    }
    std::size_t sp = 0;
    for (const Instr& in : program_->code) {
        switch (in.op) {
        case Op::push: st[sp++] = in.value; break;
        case Op::var: st[sp++] = u; break;
        case Op::add: --sp; st[sp - 1] += st[sp]; break;
        case Op::sub: --sp; st[sp - 1] -= st[sp]; break;
        case Op::mul: --sp; st[sp - 1] *= st[sp]; break;
        case Op::div: --sp; st[sp - 1] /= st[sp]; break;
        case Op::pow: {
            --sp;
            double b = st[sp - 1], e = st[sp];
            double r = std::pow(b, e);
            if (std::isnan(r) && !std::isnan(b) && !std::isnan(e)) domain_error("pow", b, program_->source);
            st[sp - 1] = r;
            break;
        }
        case Op::neg: st[sp - 1] = -st[sp - 1]; break;
        case Op::exp: st[sp - 1] = std::exp(st[sp - 1]); break;
        case Op::log:
            if (st[sp - 1] < 0.0) domain_error("log", st[sp - 1], program_->source);
            st[sp - 1] = std::log(st[sp - 1]);
            break;
        case Op::sqrt:
            if (st[sp - 1] < 0.0) domain_error("sqrt", st[sp - 1], program_->source);
            st[sp - 1] = std::sqrt(st[sp - 1]);
            break;
        }
    }
    return st[0];
}

const char* error_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::syntax: return "SyntaxError";
    case ErrorCode::domain: return "DomainError";
    case ErrorCode::oscillating_limit: return "OscillatingLimit";
    case ErrorCode::fit_failed: return "FitFailed";
    case ErrorCode::infinite_h0: return "InfiniteH0";
    case ErrorCode::no_asymptotics: return "NoAsymptotics";
    case ErrorCode::step_failure: return "StepFailure";
    case ErrorCode::bound_violation: return "BoundViolation";
    case ErrorCode::no_existence: return "NoExistence";
    case ErrorCode::bracket_failure: return "BracketFailure";
    case ErrorCode::undecidable_tail: return "UndecidableTail";
    case ErrorCode::inconsistent_endpoint: return "InconsistentEndpoint";
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::config: return "ConfigError";
    }
    return "Error";
}

} // namespace twave
