#include "reducesim/scenario.hpp"

#include "reducesim/reduction.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace reducesim {

namespace {

// ---------------------------------------------------------------------------
// validation

void require(bool condition, const char* invariant) {
    if (!condition) throw ValidationError(invariant);
}

const CurrentEdge* find_edge(const ScenarioSpec& spec, ComponentId from, ComponentId to) {
    for (const auto& e : spec.edges) {
        if (e.from == from && e.to == to) return &e;
    }
    return nullptr;
}

}  // namespace

void validate(const ScenarioSpec& spec) {
    require(!spec.name.empty(), "scenario name must be set");
    require(!spec.components.empty(), "scenario needs at least one component");

    const std::size_t n = spec.components.size();
    double sum = 0.0;
    std::size_t conscious = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& c = spec.components[i];
        require(index_of(c.id) == i, "component ids must be 0..n-1");
        require(c.weight >= 0.0 && std::isfinite(c.weight), "weights must be >= 0");
        sum += c.weight;
        if (c.status == Status::Conscious) ++conscious;
        if (c.relabel) {
            require(c.pulse_label.has_value(), "relabel requires a brain pulse");
            require(std::isfinite(c.relabel->at) && c.relabel->at >= 0.0, "relabel time must be >= 0");
        }
    }
    require(std::abs(sum - SystemState::total_weight_reference) <= 1e-9, "weights must sum to 1");
    require(conscious <= 1, "at most one conscious component");

    std::set<std::pair<ComponentId, ComponentId>> seen;
    for (const auto& e : spec.edges) {
        require(index_of(e.from) < n && index_of(e.to) < n, "edge endpoints must exist");
        require(e.from != e.to, "edges must join distinct components");
        require(seen.emplace(e.from, e.to).second, "duplicate edge");
        try {
            validate_profile(e.profile);
        } catch (const Error&) {
            throw ValidationError("flow profile parameters invalid");
        }
        const auto& target = spec.components[index_of(e.to)];
        if (e.kind == EdgeKind::Branching) {
            require(target.pulse_label.has_value() || e.nonready, "rule-2 target must carry a brain pulse");
            if (!e.nonready) require(target.status == Status::Ready, "rule-2 target must be declared ready");
        } else {
            require(!e.nonready, "nonready applies to branching edges only");
            require(target.status != Status::Ready, "ready components arise only from branching edges");
        }
    }

    for (const auto& c : spec.components) {
        if (c.status != Status::Ready) continue;
        require(c.weight == 0.0, "ready components start with weight 0");
        const bool fed = std::any_of(spec.edges.begin(), spec.edges.end(), [&](const CurrentEdge& e) {
            return e.to == c.id && e.kind == EdgeKind::Branching && !e.nonready;
        });
        const auto status = classify_emergence({c.id, EdgeKind::Branching, c.pulse_label.has_value()});
        require(fed && status == Status::Ready, "ready components arise only from branching edges");
    }

    if (!spec.cascade_chain.empty()) {
        std::set<ComponentId> distinct(spec.cascade_chain.begin(), spec.cascade_chain.end());
        require(distinct.size() == spec.cascade_chain.size(), "cascade chain must not repeat components");
        for (auto id : spec.cascade_chain) require(index_of(id) < n, "cascade chain components must exist");
        require(spec.components[index_of(spec.cascade_chain.front())].status == Status::Ready,
                "cascade must start at a ready component");
        for (std::size_t i = 0; i + 1 < spec.cascade_chain.size(); ++i) {
            const auto* e = find_edge(spec, spec.cascade_chain[i], spec.cascade_chain[i + 1]);
            require(e && e->kind == EdgeKind::Continuous, "cascade links must be continuous edges");
        }
    }

    const auto& s = spec.schedule;
    require(std::isfinite(s.t_i), "t_i must be finite");
    require(s.dt > 0.0 && s.dt <= s.t_max && std::isfinite(s.t_max), "0 < dt <= t_max");
    if (s.t_0) require(s.t_i <= *s.t_0, "t_i <= t_0");
    if (s.t_f && s.t_ob) require(*s.t_f <= *s.t_ob, "t_f <= t_ob");

    if (spec.field) {
        require(spec.field->width >= 1 && spec.field->height >= 1, "field dimensions must be >= 1");
        require(spec.field->epsilon >= 0.0, "field continuity bound must be >= 0");
    }
}

// ---------------------------------------------------------------------------
// built-in scenarios

namespace {

ComponentDecl decl(std::size_t id, double weight, std::vector<std::string> config, std::optional<std::string> pulse,
                   Status status) {
    return ComponentDecl{component_id(id), weight, std::move(config), std::move(pulse), status, std::nullopt};
}

CurrentEdge edge(std::size_t from, std::size_t to, EdgeKind kind, FlowProfile profile) {
    return CurrentEdge{component_id(from), component_id(to), profile, kind, false};
}

}  // namespace

ScenarioSpec build_classical() {
    ScenarioSpec spec;
    spec.name = "classical";
    spec.components = {
        decl(0, 1.0, {"D"}, "X", Status::Conscious),
        decl(1, 0.0, {"D"}, "X1", Status::Plain),
        decl(2, 0.0, {"D"}, "X2", Status::Plain),
        decl(3, 0.0, {"D"}, "B", Status::Plain),
    };
    spec.edges = {
        edge(0, 1, EdgeKind::Continuous, RaisedCosineFlow{0.0, 1.0, 1.0}),
        edge(1, 2, EdgeKind::Continuous, RaisedCosineFlow{1.0, 1.0, 1.0}),
        edge(2, 3, EdgeKind::Continuous, RaisedCosineFlow{2.0, 1.0, 1.0}),
    };
    spec.schedule = ScheduleMarks{0.0, std::nullopt, std::nullopt, std::nullopt, 5.0, 1e-3};
    spec.field = FieldDecl{32, 8, 2.0 / 32.0, 0.0, 1.0};
    return spec;
}

ScenarioSpec build_quantum(double transfer_total) {
    if (!(transfer_total > 0.0 && transfer_total <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "transfer total must lie in (0, 1]");
    }
    ScenarioSpec spec;
    spec.name = "quantum";
    spec.components = {
        decl(0, 1.0, {"D0"}, "B0", Status::Conscious),
        decl(1, 0.0, {"D1"}, "B1", Status::Ready),
    };
    spec.edges = {edge(0, 1, EdgeKind::Branching, RaisedCosineFlow{1.0, 2.0, transfer_total})};
    spec.schedule = ScheduleMarks{0.0, 1.0, std::nullopt, std::nullopt, 5.0, 1e-3};
    return spec;
}

ScenarioSpec build_quantum_constant(double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate)) throw Error(ErrorCode::InvalidArgument, "rate must be > 0");
    ScenarioSpec spec = build_quantum(1.0);
    spec.name = "quantum_constant";
    spec.edges.front().profile = ConstantFlow{rate};
    spec.schedule.t_0 = 0.0;
    return spec;
}

ScenarioSpec build_quantum_ddd() {
    ScenarioSpec spec;
    spec.name = "quantum_ddd";
    spec.components = {
        decl(0, 1.0, {"D0", "D0", "D0"}, "B0", Status::Conscious),
        decl(1, 0.0, {"D1", "D0", "D0"}, "B0", Status::Ready),
        decl(2, 0.0, {"D1", "D1", "D0"}, "B0", Status::Plain),
        decl(3, 0.0, {"D1", "D1", "D1"}, "B1", Status::Plain),
    };
    spec.edges = {
        edge(0, 1, EdgeKind::Branching, RaisedCosineFlow{1.0, 2.0, 1.0}),
        edge(1, 2, EdgeKind::Continuous, RaisedCosineFlow{0.0, 0.5, 1.0}),
        edge(2, 3, EdgeKind::Continuous, RaisedCosineFlow{0.5, 0.5, 1.0}),
    };
    spec.cascade_chain = {component_id(1), component_id(2), component_id(3)};
    spec.schedule = ScheduleMarks{0.0, 1.0, std::nullopt, std::nullopt, 5.0, 1e-3};
    return spec;
}

ScenarioSpec build_terminal(double w0, double w1) {
    if (!(w0 > 0.0 && w1 > 0.0) || std::abs(w0 + w1 - 1.0) > 1e-12) {
        throw Error(ErrorCode::InvalidWeights, "terminal weights must be positive and sum to 1");
    }
    constexpr double t_ob = 1.0;
    ScenarioSpec spec;
    spec.name = "terminal";
    spec.components = {
        decl(0, w0, {"D0"}, "X", Status::Plain),
        decl(1, w1, {"D1"}, "X", Status::Plain),
        decl(2, 0.0, {"D0"}, "B0", Status::Ready),
        decl(3, 0.0, {"D1"}, "B1", Status::Ready),
    };
    spec.components[0].relabel = PulseRelabel{"B", t_ob};
    spec.components[1].relabel = PulseRelabel{"B", t_ob};
    spec.edges = {
        edge(0, 2, EdgeKind::Branching, RaisedCosineFlow{t_ob, 2.0, w0}),
        edge(1, 3, EdgeKind::Branching, RaisedCosineFlow{t_ob, 2.0, w1}),
    };
    spec.schedule = ScheduleMarks{0.0, std::nullopt, 0.0, t_ob, 5.0, 1e-3};
    return spec;
}

namespace {

std::vector<double> parse_real_list(std::string_view text) {
    std::vector<double> out;
    while (!text.empty()) {
        const auto comma = text.find(',');
        const auto item = text.substr(0, comma);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (ec != std::errc{} || ptr != item.data() + item.size()) {
            throw Error(ErrorCode::InvalidArgument, "bad number '" + std::string(item) + "'");
        }
        out.push_back(v);
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

}  // namespace

ScenarioSpec builtin_scenario(std::string_view name) {
    const auto colon = name.find(':');
    const auto head = name.substr(0, colon);
    const auto args = colon == std::string_view::npos ? std::vector<double>{} : parse_real_list(name.substr(colon + 1));
    auto arity = [&](std::size_t lo, std::size_t hi) {
        if (args.size() < lo || args.size() > hi) {
            throw Error(ErrorCode::InvalidArgument, "wrong argument count for builtin '" + std::string(head) + "'");
        }
    };
    if (head == "classical") return arity(0, 0), build_classical();
    if (head == "quantum") return arity(0, 1), build_quantum(args.empty() ? 1.0 : args[0]);
    if (head == "quantum_constant") return arity(0, 1), build_quantum_constant(args.empty() ? 0.5 : args[0]);
    if (head == "quantum_ddd") return arity(0, 0), build_quantum_ddd();
    if (head == "terminal") return arity(2, 2), build_terminal(args[0], args[1]);
    throw Error(ErrorCode::InvalidArgument, "unknown builtin '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// text format

namespace {

struct Token {
    std::string_view text;
    std::size_t column = 0;  // 1-based
};

struct Pair {
    Token key;
    Token value;
};

class LineReader {
public:
    LineReader(std::string_view line, std::size_t number) : line_(line), number_(number) {}

    [[nodiscard]] bool at_end() {
        skip_space();
        return pos_ >= line_.size();
    }

    [[noreturn]] void fail(std::size_t column, const std::string& expected) const {
        throw SyntaxError(number_, column, expected);
    }

    [[nodiscard]] std::size_t column() const noexcept { return pos_ + 1; }

    Token word() {
        skip_space();
        const auto start = pos_;
        while (pos_ < line_.size() && !is_space(line_[pos_]) && line_[pos_] != '=') ++pos_;
        return Token{line_.substr(start, pos_ - start), start + 1};
    }

    void expect_literal(std::string_view literal) {
        skip_space();
        if (line_.substr(pos_, literal.size()) != literal) fail(column(), "'" + std::string(literal) + "'");
        pos_ += literal.size();
    }

    Pair pair() {
        Token key = word();
        if (key.text.empty()) fail(key.column, "key");
        skip_space();
        if (pos_ >= line_.size() || line_[pos_] != '=') fail(column(), "'=' after '" + std::string(key.text) + "'");
        ++pos_;
        skip_space();
        const auto start = pos_;
        while (pos_ < line_.size() && !is_space(line_[pos_])) ++pos_;
        return Pair{key, Token{line_.substr(start, pos_ - start), start + 1}};
    }

    std::vector<Pair> pairs() {
        std::vector<Pair> out;
        std::set<std::string_view> keys;
        while (!at_end()) {
            auto p = pair();
            if (!keys.insert(p.key.text).second) fail(p.key.column, "no repeated key '" + std::string(p.key.text) + "'");
            out.push_back(p);
        }
        return out;
    }

    [[nodiscard]] std::size_t number() const noexcept { return number_; }

private:
    static bool is_space(char c) noexcept { return c == ' ' || c == '\t' || c == '\r'; }
    void skip_space() noexcept {
        while (pos_ < line_.size() && is_space(line_[pos_])) ++pos_;
    }

    std::string_view line_;
    std::size_t number_;
    std::size_t pos_ = 0;
};

double to_real(const LineReader& r, const Token& t) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (t.text.empty() || ec != std::errc{} || ptr != t.text.data() + t.text.size()) r.fail(t.column, "real number");
    return v;
}

std::size_t to_index(const LineReader& r, const Token& t) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (t.text.empty() || ec != std::errc{} || ptr != t.text.data() + t.text.size() || v > 1'000'000) {
        r.fail(t.column, "component id");
    }
    return v;
}

int to_int(const LineReader& r, const Token& t) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (t.text.empty() || ec != std::errc{} || ptr != t.text.data() + t.text.size()) r.fail(t.column, "integer");
    return v;
}

bool to_bool(const LineReader& r, const Token& t) {
    if (t.text == "true") return true;
    if (t.text == "false") return false;
    r.fail(t.column, "true or false");
}

std::vector<Token> split_list(const Token& t, char sep = ',') {
    std::vector<Token> out;
    if (t.text.empty()) return out;
    std::size_t start = 0;
    for (;;) {
        const auto next = t.text.find(sep, start);
        out.push_back(Token{t.text.substr(start, next == std::string_view::npos ? next : next - start),
                            t.column + start});
        if (next == std::string_view::npos) break;
        start = next + 1;
    }
    return out;
}

bool valid_label(std::string_view s) noexcept {
    return !s.empty() && s.find_first_of(",=@# \t") == std::string_view::npos;
}

std::string to_label(const LineReader& r, const Token& t) {
    if (!valid_label(t.text)) r.fail(t.column, "label");
    return std::string(t.text);
}

std::vector<double> to_reals(const LineReader& r, const Token& t, std::size_t count) {
    const auto parts = split_list(t);
    if (parts.size() != count) r.fail(t.column, std::to_string(count) + " comma-separated reals");
    std::vector<double> out;
    for (const auto& p : parts) out.push_back(to_real(r, p));
    return out;
}

FlowProfile to_profile(const LineReader& r, const Token& t) {
    const auto colon = t.text.find(':');
    if (colon == std::string_view::npos) r.fail(t.column, "constant:J, ramp:Jmax,t0,t1 or rcos:t0,dur,total");
    const auto kind = t.text.substr(0, colon);
    const Token args{t.text.substr(colon + 1), t.column + colon + 1};
    if (kind == "constant") return ConstantFlow{to_reals(r, args, 1)[0]};
    if (kind == "ramp") {
        const auto v = to_reals(r, args, 3);
        return RampFlow{v[0], v[1], v[2]};
    }
    if (kind == "rcos") {
        const auto v = to_reals(r, args, 3);
        return RaisedCosineFlow{v[0], v[1], v[2]};
    }
    r.fail(t.column, "profile kind constant, ramp or rcos");
}

[[noreturn]] void unknown_key(const LineReader& r, const Pair& p, const char* allowed) {
    r.fail(p.key.column, std::string("one of ") + allowed + " (unknown key '" + std::string(p.key.text) + "')");
}

enum class Section { None, Scenario, Components, Edges, Cascade, Schedule, Field };

}  // namespace

ScenarioSpec parse_scenario(std::string_view text) {
    ScenarioSpec spec;
    spec.schedule = ScheduleMarks{};
    bool normalize = false;
    std::map<std::size_t, ComponentDecl> components;
    std::set<Section> seen_sections;
    std::set<std::string, std::less<>> section_keys;  // keys seen in the current singleton section
    Section section = Section::None;

    std::size_t number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        ++number;
        const auto eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

        LineReader r(line, number);
        if (r.at_end()) continue;

        const auto open = line.find_first_not_of(" \t");
        if (line[open] == '[') {
            const auto close = line.find(']', open);
            if (close == std::string_view::npos) r.fail(open + 1, "']'");
            if (line.find_first_not_of(" \t\r", close + 1) != std::string_view::npos) r.fail(close + 2, "end of line");
            const auto name = line.substr(open + 1, close - open - 1);
            static const std::map<std::string_view, Section> names = {
                {"scenario", Section::Scenario}, {"components", Section::Components}, {"edges", Section::Edges},
                {"cascade", Section::Cascade},   {"schedule", Section::Schedule},     {"field", Section::Field},
            };
            const auto it = names.find(name);
            if (it == names.end()) r.fail(open + 2, "section scenario, components, edges, cascade, schedule or field");
            if (!seen_sections.insert(it->second).second) r.fail(open + 2, "each section at most once");
            section = it->second;
            section_keys.clear();
            if (section == Section::Field) spec.field = FieldDecl{};
            continue;
        }

        const bool singleton = section != Section::Components && section != Section::Edges;
        auto pairs = [&] {
            auto out = r.pairs();
            for (const auto& p : out) {
                if (singleton && !section_keys.emplace(p.key.text).second) {
                    r.fail(p.key.column, "no repeated key '" + std::string(p.key.text) + "'");
                }
            }
            return out;
        };

        switch (section) {
        case Section::None:
            r.fail(open + 1, "a section header");
        case Section::Scenario:
            for (const auto& p : pairs()) {
                if (p.key.text == "name") {
                    spec.name = to_label(r, p.value);
                } else if (p.key.text == "normalize") {
                    normalize = to_bool(r, p.value);
                } else {
                    unknown_key(r, p, "name, normalize");
                }
            }
            break;
        case Section::Components: {
            const auto id_token = r.word();
            const auto id = to_index(r, id_token);
            if (components.count(id)) r.fail(id_token.column, "a component id not declared before");
            ComponentDecl c;
            c.id = component_id(id);
            bool has_weight = false;
            for (const auto& p : pairs()) {
                if (p.key.text == "weight") {
                    c.weight = to_real(r, p.value);
                    has_weight = true;
                } else if (p.key.text == "config") {
                    for (const auto& item : split_list(p.value)) c.detector_config.push_back(to_label(r, item));
                } else if (p.key.text == "pulse") {
                    if (p.value.text != "none") c.pulse_label = to_label(r, p.value);
                } else if (p.key.text == "status") {
                    const auto status = parse_status(p.value.text);
                    if (!status) r.fail(p.value.column, "plain, ready or conscious");
                    c.status = *status;
                } else if (p.key.text == "relabel") {
                    const auto parts = split_list(p.value, '@');
                    if (parts.size() != 2) r.fail(p.value.column, "LABEL@time");
                    c.relabel = PulseRelabel{to_label(r, parts[0]), to_real(r, parts[1])};
                } else {
                    unknown_key(r, p, "weight, config, pulse, status, relabel");
                }
            }
            if (!has_weight) r.fail(r.column(), "weight=<real>");
            components.emplace(id, std::move(c));
            break;
        }
        case Section::Edges: {
            CurrentEdge e;
            e.from = component_id(to_index(r, r.word()));
            r.expect_literal("->");
            e.to = component_id(to_index(r, r.word()));
            bool has_kind = false;
            bool has_profile = false;
            for (const auto& p : pairs()) {
                if (p.key.text == "kind") {
                    if (p.value.text == "continuous") {
                        e.kind = EdgeKind::Continuous;
                    } else if (p.value.text == "branching") {
                        e.kind = EdgeKind::Branching;
                    } else {
                        r.fail(p.value.column, "continuous or branching");
                    }
                    has_kind = true;
                } else if (p.key.text == "profile") {
                    e.profile = to_profile(r, p.value);
                    has_profile = true;
                } else if (p.key.text == "nonready") {
                    e.nonready = to_bool(r, p.value);
                } else {
                    unknown_key(r, p, "kind, profile, nonready");
                }
            }
            if (!has_kind) r.fail(r.column(), "kind=<continuous|branching>");
            if (!has_profile) r.fail(r.column(), "profile=<...>");
            spec.edges.push_back(std::move(e));
            break;
        }
        case Section::Cascade:
            for (const auto& p : pairs()) {
                if (p.key.text != "chain") unknown_key(r, p, "chain");
                for (const auto& item : split_list(p.value)) spec.cascade_chain.push_back(component_id(to_index(r, item)));
            }
            break;
        case Section::Schedule:
            for (const auto& p : pairs()) {
                const double v = to_real(r, p.value);
                if (p.key.text == "t_i") {
                    spec.schedule.t_i = v;
                } else if (p.key.text == "t_0") {
                    spec.schedule.t_0 = v;
                } else if (p.key.text == "t_f") {
                    spec.schedule.t_f = v;
                } else if (p.key.text == "t_ob") {
                    spec.schedule.t_ob = v;
                } else if (p.key.text == "t_max") {
                    spec.schedule.t_max = v;
                } else if (p.key.text == "dt") {
                    spec.schedule.dt = v;
                } else {
                    unknown_key(r, p, "t_i, t_0, t_f, t_ob, t_max, dt");
                }
            }
            break;
        case Section::Field:
            for (const auto& p : pairs()) {
                if (p.key.text == "width") {
                    spec.field->width = to_int(r, p.value);
                } else if (p.key.text == "height") {
                    spec.field->height = to_int(r, p.value);
                } else if (p.key.text == "epsilon") {
                    spec.field->epsilon = to_real(r, p.value);
                } else if (p.key.text == "hue") {
                    const auto v = to_reals(r, p.value, 2);
                    spec.field->hue_from = v[0];
                    spec.field->hue_to = v[1];
                } else {
                    unknown_key(r, p, "width, height, epsilon, hue");
                }
            }
            break;
        }
    }

    for (auto& [id, c] : components) spec.components.push_back(std::move(c));

    if (normalize) {
        double sum = 0.0;
        for (const auto& c : spec.components) sum += c.weight;
        if (sum > 0.0) {
            for (auto& c : spec.components) c.weight /= sum;
        }
    }
    validate(spec);
    return spec;
}

namespace {

std::string real(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string profile_text(const FlowProfile& profile) {
    if (const auto* c = std::get_if<ConstantFlow>(&profile)) return "constant:" + real(c->rate);
    if (const auto* r = std::get_if<RampFlow>(&profile)) {
        return "ramp:" + real(r->peak) + "," + real(r->t_start) + "," + real(r->t_end);
    }
    const auto& rc = std::get<RaisedCosineFlow>(profile);
    return "rcos:" + real(rc.t_start) + "," + real(rc.duration) + "," + real(rc.total);
}

}  // namespace

std::string serialize_scenario(const ScenarioSpec& spec) {
    std::ostringstream out;
    out << "[scenario]\nname = " << spec.name << "\n\n[components]\n";
    for (const auto& c : spec.components) {
        out << index_of(c.id) << " weight=" << real(c.weight) << " config=";
        for (std::size_t i = 0; i < c.detector_config.size(); ++i) out << (i ? "," : "") << c.detector_config[i];
        out << " pulse=" << c.pulse_label.value_or("none") << " status=" << to_string(c.status);
        if (c.relabel) out << " relabel=" << c.relabel->label << '@' << real(c.relabel->at);
        out << '\n';
    }
    out << "\n[edges]\n";
    for (const auto& e : spec.edges) {
        out << index_of(e.from) << " -> " << index_of(e.to)
            << " kind=" << (e.kind == EdgeKind::Branching ? "branching" : "continuous")
            << " profile=" << profile_text(e.profile);
        if (e.nonready) out << " nonready=true";
        out << '\n';
    }
    if (!spec.cascade_chain.empty()) {
        out << "\n[cascade]\nchain = ";
        for (std::size_t i = 0; i < spec.cascade_chain.size(); ++i) {
            out << (i ? "," : "") << index_of(spec.cascade_chain[i]);
        }
        out << '\n';
    }
    const auto& s = spec.schedule;
    out << "\n[schedule]\nt_i=" << real(s.t_i) << '\n';
    if (s.t_0) out << "t_0=" << real(*s.t_0) << '\n';
    if (s.t_f) out << "t_f=" << real(*s.t_f) << '\n';
    if (s.t_ob) out << "t_ob=" << real(*s.t_ob) << '\n';
    out << "t_max=" << real(s.t_max) << "\ndt=" << real(s.dt) << '\n';
    if (spec.field) {
        const auto& f = *spec.field;
        out << "\n[field]\nwidth=" << f.width << " height=" << f.height << " epsilon=" << real(f.epsilon)
            << " hue=" << real(f.hue_from) << ',' << real(f.hue_to) << '\n';
    }
    return out.str();
}

ScenarioSpec load_scenario(const std::string& source) {
    constexpr std::string_view prefix = "builtin:";
    if (source.rfind(prefix, 0) == 0) return builtin_scenario(std::string_view(source).substr(prefix.size()));
    std::ifstream in(source, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read " + source);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str());
}

SystemState initial_state(const ScenarioSpec& spec) {
    SystemState state;
    state.time = 0.0;
    for (const auto& c : spec.components) {
        state.components.push_back(Component{c.id, c.weight, c.detector_config, c.pulse_label, c.status});
    }
    return state;
}

CurrentGraph current_graph(const ScenarioSpec& spec) { return CurrentGraph(spec.edges); }

std::vector<FlowProfile> cascade_profiles(const ScenarioSpec& spec) {
    std::vector<FlowProfile> out;
    for (std::size_t i = 0; i + 1 < spec.cascade_chain.size(); ++i) {
        const auto* e = find_edge(spec, spec.cascade_chain[i], spec.cascade_chain[i + 1]);
        if (!e) throw ValidationError("cascade links must be continuous edges");
        out.push_back(e->profile);
    }
    return out;
}

PulseField make_field(const FieldDecl& decl) {
    return hue_ramp_field(decl.width, decl.height, decl.epsilon, decl.hue_from, decl.hue_to);
}

}  // namespace reducesim
