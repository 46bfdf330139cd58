#include "mico/instance_io.hpp"

#include <cmath>
#include <sstream>

namespace mico {

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
    throw InstanceError("line " + std::to_string(line) + ": " + msg);
}

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) {
        if (tok[0] == '#') break;
        out.push_back(tok);
    }
    return out;
}

double num(const std::string& tok, int line) {
    try {
        std::size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size()) fail(line, "bad number '" + tok + "'");
        return v;
    } catch (const InstanceError&) {
        throw;
    } catch (const std::exception&) {
        fail(line, "bad number '" + tok + "'");
    }
}

Vec nums(const std::vector<std::string>& toks, std::size_t from, std::size_t count, int line) {
    if (toks.size() < from + count) fail(line, "expected " + std::to_string(count) + " numbers");
    Vec v(count);
    for (std::size_t i = 0; i < count; ++i) v[i] = num(toks[from + i], line);
    return v;
}

ParsedInstance from_poly(const PolyInstance& pi, double big_r) {
    ParsedInstance out;
    out.params.n = pi.n;
    out.params.d = pi.d;
    out.params.R = big_r;
    out.params.M = std::max(1.0, norm2(pi.c));
    out.params.rho = 1.0;
    out.params.eps = 1e-6;
    out.params.delta = 1e-3;
    out.body = ConvexBodySpec::polyhedron(pi.rows);
    out.objective = ObjectiveSpec::linear(pi.c);
    return out;
}

}  // namespace

ParsedInstance parse_instance(const std::string& text) {
    ParsedInstance out;
    bool have_params = false, have_body = false;
    std::vector<ConvexBodySpec> parts;
    std::vector<Halfspace> rows;
    std::vector<std::pair<Vec, double>> pieces;
    bool want_maxaffine = false;

    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    int dim = -1;
    auto need_dim = [&](int ln) {
        if (dim < 0) fail(ln, "params must come before bodies and objectives");
        return static_cast<std::size_t>(dim);
    };
    while (std::getline(is, line)) {
        lineno++;
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        const std::string& kw = toks[0];
        if (kw == "generator") {
            if (toks.size() != 3) fail(lineno, "usage: generator <jeroslow|triangle> <size>");
            double sz = num(toks[2], lineno);
            if (toks[1] == "jeroslow")
                return from_poly(jeroslow_instance(static_cast<int>(sz)),
                                 2.0 * std::ceil(std::sqrt(sz + 1.0)) + 2.0);
            if (toks[1] == "triangle") return from_poly(hidden_triangle_instance(sz), sz + 2.0);
            fail(lineno, "unknown generator '" + toks[1] + "'");
        } else if (kw == "params") {
            if (toks.size() != 8) fail(lineno, "usage: params n d R M rho eps delta");
            out.params.n = static_cast<int>(num(toks[1], lineno));
            out.params.d = static_cast<int>(num(toks[2], lineno));
            out.params.R = num(toks[3], lineno);
            out.params.M = num(toks[4], lineno);
            out.params.rho = num(toks[5], lineno);
            out.params.eps = num(toks[6], lineno);
            out.params.delta = num(toks[7], lineno);
            try {
                out.params.validate();
            } catch (const InputError& e) {
                fail(lineno, e.what());
            }
            dim = out.params.n + out.params.d;
            have_params = true;
        } else if (kw == "body") {
            std::size_t k = need_dim(lineno);
            if (toks.size() < 2) fail(lineno, "body needs a kind");
            const std::string& kind = toks[1];
            if (kind == "ball" || kind == "supball") {
                Vec c = nums(toks, 2, k, lineno);
                if (toks.size() != 3 + k) fail(lineno, "usage: body ball <c...> <r>");
                double r = num(toks[2 + k], lineno);
                parts.push_back(ConvexBodySpec::ball(
                    std::move(c), r, kind == "ball" ? Norm::Euclidean : Norm::Sup));
            } else if (kind == "box") {
                if (toks.size() != 2 + 2 * k) fail(lineno, "usage: body box <l...> <u...>");
                Vec lo = nums(toks, 2, k, lineno);
                Vec hi = nums(toks, 2 + k, k, lineno);
                try {
                    parts.push_back(ConvexBodySpec::box(std::move(lo), std::move(hi)));
                } catch (const InputError& e) {
                    fail(lineno, e.what());
                }
            } else {
                fail(lineno, "unknown body kind '" + kind + "'");
            }
        } else if (kw == "row") {
            std::size_t k = need_dim(lineno);
            if (toks.size() != 2 + k) fail(lineno, "usage: row <a...> <b>");
            Vec a = nums(toks, 1, k, lineno);
            double b = num(toks[1 + k], lineno);
            try {
                rows.emplace_back(std::move(a), b);
            } catch (const InputError& e) {
                fail(lineno, e.what());
            }
        } else if (kw == "objective") {
            std::size_t k = need_dim(lineno);
            if (toks.size() < 2) fail(lineno, "objective needs a kind");
            const std::string& kind = toks[1];
            if (kind == "linear") {
                out.objective = ObjectiveSpec::linear(nums(toks, 2, k, lineno));
            } else if (kind == "constant") {
                if (toks.size() != 3) fail(lineno, "usage: objective constant <v>");
                out.objective = ObjectiveSpec::constant(num(toks[2], lineno));
            } else if (kind == "maxaffine") {
                want_maxaffine = true;
            } else {
                fail(lineno, "unknown objective kind '" + kind + "'");
            }
        } else if (kw == "piece") {
            std::size_t k = need_dim(lineno);
            if (!want_maxaffine) fail(lineno, "piece outside a maxaffine objective");
            if (toks.size() != 2 + k) fail(lineno, "usage: piece <a...> <b>");
            pieces.emplace_back(nums(toks, 1, k, lineno), num(toks[1 + k], lineno));
        } else {
            fail(lineno, "unknown directive '" + kw + "'");
        }
    }
    if (!have_params) fail(lineno, "missing params line");
    if (!rows.empty()) parts.push_back(ConvexBodySpec::polyhedron(std::move(rows)));
    if (parts.empty()) fail(lineno, "instance declares no body");
    out.body = parts.size() == 1 ? std::move(parts[0])
                                 : ConvexBodySpec::intersection(std::move(parts));
    have_body = true;
    (void)have_body;
    if (want_maxaffine) {
        if (pieces.empty()) fail(lineno, "maxaffine objective has no pieces");
        out.objective = ObjectiveSpec::max_affine(std::move(pieces));
    }
    return out;
}

namespace {

void print_vec(std::ostringstream& os, const Vec& v) {
    for (double x : v) os << ' ' << x;
}

void print_body(std::ostringstream& os, const ConvexBodySpec& body) {
    std::visit(
        [&](const auto& b) {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, BallBody>) {
                os << (b.norm == Norm::Euclidean ? "body ball" : "body supball");
                print_vec(os, b.center);
                os << ' ' << b.radius << '\n';
            } else if constexpr (std::is_same_v<T, BoxBody>) {
                os << "body box";
                print_vec(os, b.lower);
                print_vec(os, b.upper);
                os << '\n';
            } else if constexpr (std::is_same_v<T, PolyhedronBody>) {
                for (const Halfspace& h : b.rows) {
                    os << "row";
                    print_vec(os, h.normal);
                    os << ' ' << h.offset << '\n';
                }
            } else if constexpr (std::is_same_v<T, IntersectionBody>) {
                for (const ConvexBodySpec& part : b.parts) print_body(os, part);
            } else {
                throw CapabilityError("print_instance: body kind has no text form");
            }
        },
        body.v);
}

}  // namespace

std::string print_instance(const ParsedInstance& inst) {
    std::ostringstream os;
    os.precision(17);
    const auto& p = inst.params;
    os << "params " << p.n << ' ' << p.d << ' ' << p.R << ' ' << p.M << ' ' << p.rho << ' '
       << p.eps << ' ' << p.delta << '\n';
    print_body(os, inst.body);
    std::visit(
        [&](const auto& o) {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, LinearObjective>) {
                os << "objective linear";
                print_vec(os, o.c);
                os << '\n';
            } else if constexpr (std::is_same_v<T, ConstantObjective>) {
                os << "objective constant " << o.value << '\n';
            } else if constexpr (std::is_same_v<T, MaxAffineObjective>) {
                os << "objective maxaffine\n";
                for (const auto& [a, b] : o.pieces) {
                    os << "piece";
                    print_vec(os, a);
                    os << ' ' << b << '\n';
                }
            } else {
                throw CapabilityError("print_instance: objective kind has no text form");
            }
        },
        inst.objective.v);
    return os.str();
}

PolyInstance to_poly_instance(const ParsedInstance& inst) {
    const auto* poly = std::get_if<PolyhedronBody>(&inst.body.v);
    if (!poly) throw InputError("to_poly_instance: body must be a single polyhedron");
    const auto* lin = std::get_if<LinearObjective>(&inst.objective.v);
    if (!lin) throw InputError("to_poly_instance: objective must be linear");
    PolyInstance out;
    out.rows = poly->rows;
    out.c = lin->c;
    out.n = inst.params.n;
    out.d = inst.params.d;
    return out;
}

}  // namespace mico
