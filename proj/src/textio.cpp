#include "csplab/textio.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>
#include <string_view>

#include "csplab/errors.hpp"

namespace csplab::textio {

namespace {

using pairs::kBwd;
using pairs::kEq;
using pairs::kFwd;
using pairs::Label;

class Cursor {
public:
    Cursor(std::string_view text, std::size_t line) : text_(text), line_(line) {}

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }
    bool at_end() {
        skip_ws();
        return pos_ >= text_.size();
    }
    bool peek_digit() {
        skip_ws();
        return pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]));
    }
    bool accept(std::string_view lit) {
        skip_ws();
        if (text_.substr(pos_, lit.size()) == lit) {
            pos_ += lit.size();
            return true;
        }
        return false;
    }
    void expect(std::string_view lit) {
        if (!accept(lit)) {
            fail("expected '" + std::string(lit) + "'");
        }
    }
    std::string name() {
        skip_ws();
        const std::size_t start = pos_;
        if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                ++pos_;
            }
        }
        if (start == pos_) {
            fail("expected a name");
        }
        return std::string(text_.substr(start, pos_ - start));
    }
    std::size_t number() {
        skip_ws();
        const std::size_t start = pos_;
        std::size_t value = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            if (value > 100000) {
                fail("number too large");
            }
            value = value * 10 + static_cast<std::size_t>(text_[pos_] - '0');
            ++pos_;
        }
        if (start == pos_) {
            fail("expected a number");
        }
        return value;
    }
    std::size_t column() const { return pos_ + 1; }
    std::size_t line() const { return line_; }
    [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, line_, column()); }
    void expect_end() {
        if (!at_end()) {
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        }
    }

private:
    std::string_view text_;
    std::size_t line_;
    std::size_t pos_ = 0;
};

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        lines.push_back(line);
    }
    return lines;
}

[[noreturn]] void arity_fail(const Cursor& cur, const std::string& message) {
    throw ArityError("line " + std::to_string(cur.line()) + ": " + message);
}

std::size_t position(Cursor& cur, std::size_t arity) {
    const std::size_t p = cur.number();
    if (p < 1 || p > arity) {
        arity_fail(cur, "position " + std::to_string(p) + " outside 1.." + std::to_string(arity));
    }
    return p - 1;
}

void require_all_positions(const Cursor& cur, const std::vector<bool>& seen) {
    for (std::size_t p = 0; p < seen.size(); ++p) {
        if (!seen[p]) {
            arity_fail(cur, "position " + std::to_string(p + 1) + " missing from type");
        }
    }
}

temporal::WeakOrderType parse_temporal_type(Cursor& cur, std::size_t arity) {
    std::vector<std::vector<std::size_t>> blocks(1);
    std::vector<bool> seen(arity, false);
    while (true) {
        const std::size_t p = position(cur, arity);
        if (seen[p]) {
            cur.fail("position " + std::to_string(p + 1) + " repeated");
        }
        seen[p] = true;
        blocks.back().push_back(p);
        if (cur.accept("<")) {
            blocks.emplace_back();
        } else if (!cur.accept("=")) {
            break;
        }
    }
    require_all_positions(cur, seen);
    return temporal::WeakOrderType::from_blocks(blocks, arity);
}

homog::LabeledType parse_labeled_type(Cursor& cur, std::size_t arity, const pairs::BaseSpec& base) {
    std::vector<std::size_t> parent(arity);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            x = parent[x];
        }
        return x;
    };
    struct Arc {
        std::size_t from, to, column;
    };
    std::vector<Arc> arcs;
    const bool graph = !base.oriented();
    if (!cur.accept("-")) {
        do {
            const std::size_t column = cur.column();
            if (graph && cur.accept("E")) {
                cur.expect("(");
                const std::size_t a = position(cur, arity);
                cur.expect(",");
                const std::size_t b = position(cur, arity);
                cur.expect(")");
                arcs.push_back({a, b, column});
                continue;
            }
            const std::size_t a = position(cur, arity);
            if (cur.accept("=")) {
                const std::size_t b = position(cur, arity);
                const auto ra = find(a);
                const auto rb = find(b);
                parent[std::max(ra, rb)] = std::min(ra, rb);
            } else if (!graph && cur.accept("->")) {
                arcs.push_back({a, position(cur, arity), column});
            } else {
                cur.fail(graph ? "expected 'E(i,j)' or 'i=j'" : "expected 'i->j' or 'i=j'");
            }
        } while (cur.accept(","));
    }
    std::vector<std::size_t> rep(arity);
    for (std::size_t p = 0; p < arity; ++p) {
        rep[p] = find(p);
    }
    // Labels between block representatives a < b.
    std::map<std::pair<std::size_t, std::size_t>, Label> labels;
    for (const auto& arc : arcs) {
        std::size_t a = rep[arc.from];
        std::size_t b = rep[arc.to];
        if (a == b) {
            throw ParseError("label inside a block", cur.line(), arc.column);
        }
        Label l = kFwd;
        if (a > b) {
            std::swap(a, b);
            l = pairs::flip(l, base.oriented());
        }
        auto [it, inserted] = labels.emplace(std::make_pair(a, b), l);
        if (!inserted && it->second != l) {
            throw ParseError("conflicting labels", cur.line(), arc.column);
        }
    }
    homog::LabeledType type{arity, pairs::PairCode(pairs::num_pairs(arity), kEq)};
    for (std::size_t j = 1; j < arity; ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            std::size_t a = rep[i];
            std::size_t b = rep[j];
            if (a == b) {
                continue;
            }
            const bool swapped = a > b;
            if (swapped) {
                std::swap(a, b);
            }
            auto it = labels.find({a, b});
            Label l = kBwd;
            if (it != labels.end()) {
                l = it->second;
            } else if (!graph) {
                cur.fail("no arc between positions " + std::to_string(a + 1) + " and " + std::to_string(b + 1));
            }
            type.code[pairs::pair_index(i, j)] = swapped ? pairs::flip(l, base.oriented()) : l;
        }
    }
    return type;
}

Tuple parse_tuple(Cursor& cur, std::size_t arity, int domain) {
    Tuple t;
    while (cur.peek_digit()) {
        const std::size_t column = cur.column();
        const std::size_t v = cur.number();
        if (v >= static_cast<std::size_t>(domain)) {
            throw ParseError("value outside the domain", cur.line(), column);
        }
        t.push_back(static_cast<int>(v));
    }
    if (t.size() != arity) {
        arity_fail(cur, "tuple of length " + std::to_string(t.size()) + " in a relation of arity " +
                            std::to_string(arity));
    }
    return t;
}

Template parse_base(Cursor& cur) {
    if (cur.accept("temporal")) {
        return temporal::TemporalTemplate{};
    }
    if (cur.accept("tournament")) {
        return homog::HomTemplate{{pairs::BaseKind::Tournament, 0}, {}};
    }
    if (cur.accept("graph")) {
        return homog::HomTemplate{{pairs::BaseKind::Graph, 0}, {}};
    }
    if (cur.accept("kfree")) {
        cur.expect("(");
        const std::size_t n = cur.number();
        if (n < 2) {
            cur.fail("kfree needs a clique size of at least 2");
        }
        cur.expect(")");
        return homog::HomTemplate{{pairs::BaseKind::KFree, static_cast<int>(n)}, {}};
    }
    if (cur.accept("finite")) {
        cur.expect("(");
        const std::size_t n = cur.number();
        if (n < 1) {
            cur.fail("finite domain must be non-empty");
        }
        cur.expect(")");
        return FiniteStructure(static_cast<int>(n));
    }
    cur.fail("unknown base");
}

void parse_relation(Cursor& cur, Template& tmpl) {
    const std::string name = cur.name();
    cur.expect("/");
    const std::size_t arity = cur.number();
    if (arity == 0) {
        cur.fail("arity must be positive");
    }
    cur.expect(":");
    const bool empty = cur.at_end();
    std::visit(
        [&](auto& t) {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, temporal::TemporalTemplate>) {
                if (arity > temporal::kMaxWeakOrderArity) {
                    cur.fail("temporal relations are limited to arity 8");
                }
                std::vector<temporal::WeakOrderType> types;
                if (!empty) {
                    do {
                        types.push_back(parse_temporal_type(cur, arity));
                    } while (cur.accept(";"));
                }
                cur.expect_end();
                t.add(name, temporal::TemporalRelation(arity, std::move(types)));
            } else if constexpr (std::is_same_v<T, homog::HomTemplate>) {
                std::set<homog::LabeledType> types;
                if (!empty) {
                    do {
                        const std::size_t column = cur.column();
                        auto type = parse_labeled_type(cur, arity, t.base);
                        if (!pairs::is_valid(type.code, arity, t.base)) {
                            throw ParseError("type contains a forbidden clique", cur.line(), column);
                        }
                        types.insert(std::move(type));
                    } while (cur.accept(";"));
                }
                cur.expect_end();
                t.add(name, homog::TypeSetRelation(arity, t.base, std::move(types)));
            } else {
                std::set<Tuple> tuples;
                if (!empty) {
                    do {
                        tuples.insert(parse_tuple(cur, arity, t.domain_size()));
                    } while (cur.accept(";"));
                }
                cur.expect_end();
                t.add_relation(name, arity, std::move(tuples));
            }
        },
        tmpl);
}

bool has_relation(const Template& tmpl, const std::string& name) {
    const auto arities = relation_arities(tmpl);
    return arities.count(name) != 0;
}

}  // namespace

Template parse_template(const std::string& text) {
    std::optional<Template> tmpl;
    const auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        Cursor cur(lines[i], i + 1);
        if (cur.at_end()) {
            continue;
        }
        if (cur.accept("base:")) {
            if (tmpl) {
                cur.fail("duplicate base line");
            }
            tmpl = parse_base(cur);
            cur.expect_end();
            continue;
        }
        if (!cur.accept("rel")) {
            cur.fail("expected 'base:' or 'rel'");
        }
        if (!tmpl) {
            cur.fail("relation before the base line");
        }
        Cursor probe = cur;
        const std::string name = probe.name();
        if (has_relation(*tmpl, name)) {
            cur.fail("duplicate relation " + name);
        }
        parse_relation(cur, *tmpl);
    }
    if (!tmpl) {
        throw ParseError("missing base line", lines.size() + 1, 1);
    }
    return std::move(*tmpl);
}

std::string format_temporal_type(const temporal::WeakOrderType& type) {
    std::string out;
    const auto blocks = type.blocks();
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (b > 0) {
            out += '<';
        }
        for (std::size_t i = 0; i < blocks[b].size(); ++i) {
            if (i > 0) {
                out += '=';
            }
            out += std::to_string(blocks[b][i] + 1);
        }
    }
    return out;
}

std::string format_labeled_type(const homog::LabeledType& type, const pairs::BaseSpec& base,
                                std::span<const std::string> names) {
    auto label = [&](std::size_t p) { return names.empty() ? std::to_string(p + 1) : names[p]; };
    std::vector<std::string> items;
    const auto rep = pairs::representatives(type.code, type.arity);
    for (std::size_t j = 0; j < type.arity; ++j) {
        if (rep[j] != j) {
            items.push_back(label(rep[j]) + "=" + label(j));
        }
    }
    for (std::size_t a = 0; a < type.arity; ++a) {
        for (std::size_t b = a + 1; b < type.arity; ++b) {
            if (rep[a] != a || rep[b] != b) {
                continue;
            }
            const Label l = type.code[pairs::pair_index(a, b)];
            const std::string sa = label(a);
            const std::string sb = label(b);
            if (base.oriented()) {
                items.push_back(l == kFwd ? sa + "->" + sb : sb + "->" + sa);
            } else if (l == kFwd) {
                items.push_back("E(" + sa + "," + sb + ")");
            }
        }
    }
    if (items.empty()) {
        return "-";
    }
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        out += (i > 0 ? ", " : "") + items[i];
    }
    return out;
}

std::string base_name(const Template& tmpl) {
    return std::visit(
        [](const auto& t) -> std::string {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, temporal::TemporalTemplate>) {
                return "temporal";
            } else if constexpr (std::is_same_v<T, homog::HomTemplate>) {
                switch (t.base.kind) {
                    case pairs::BaseKind::Tournament: return "tournament";
                    case pairs::BaseKind::Graph: return "graph";
                    case pairs::BaseKind::KFree: return "kfree(" + std::to_string(t.base.clique) + ")";
                    case pairs::BaseKind::Order: return "order";
                }
                return "?";
            } else {
                return "finite(" + std::to_string(t.domain_size()) + ")";
            }
        },
        tmpl);
}

std::string format_template(const Template& tmpl) {
    std::string out = "base: " + base_name(tmpl) + "\n";
    auto line = [&](const std::string& name, std::size_t arity, const std::vector<std::string>& items) {
        out += "rel " + name + "/" + std::to_string(arity) + ":";
        for (std::size_t i = 0; i < items.size(); ++i) {
            out += (i > 0 ? "; " : " ") + items[i];
        }
        out += "\n";
    };
    std::visit(
        [&](const auto& t) {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, temporal::TemporalTemplate>) {
                for (const auto& [name, rel] : t.relations()) {
                    std::vector<std::string> items;
                    for (const auto& type : rel.types()) {
                        items.push_back(format_temporal_type(type));
                    }
                    line(name, rel.arity(), items);
                }
            } else if constexpr (std::is_same_v<T, homog::HomTemplate>) {
                for (const auto& [name, rel] : t.relations) {
                    std::vector<std::string> items;
                    for (const auto& type : rel.types()) {
                        items.push_back(format_labeled_type(type, t.base));
                    }
                    line(name, rel.arity(), items);
                }
            } else {
                for (const auto& [name, rel] : t.relations()) {
                    std::vector<std::string> items;
                    for (const auto& tuple : rel.tuples) {
                        std::string s;
                        for (std::size_t i = 0; i < tuple.size(); ++i) {
                            s += (i > 0 ? " " : "") + std::to_string(tuple[i]);
                        }
                        items.push_back(s);
                    }
                    line(name, rel.arity, items);
                }
            }
        },
        tmpl);
    return out;
}

std::map<std::string, std::size_t> relation_arities(const Template& tmpl) {
    std::map<std::string, std::size_t> out;
    std::visit(
        [&](const auto& t) {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, temporal::TemporalTemplate>) {
                for (const auto& [name, rel] : t.relations()) {
                    out[name] = rel.arity();
                }
            } else if constexpr (std::is_same_v<T, homog::HomTemplate>) {
                for (const auto& [name, rel] : t.relations) {
                    out[name] = rel.arity();
                }
            } else {
                for (const auto& [name, rel] : t.relations()) {
                    out[name] = rel.arity;
                }
            }
        },
        tmpl);
    return out;
}

Instance parse_instance(const std::string& text, const Template& tmpl) {
    const auto arities = relation_arities(tmpl);
    Instance instance;
    const auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        Cursor cur(lines[i], i + 1);
        if (cur.at_end()) {
            continue;
        }
        const std::size_t column = cur.column();
        const std::string head = cur.name();
        if (head == "vars" && !cur.accept("(")) {
            while (!cur.at_end()) {
                const std::size_t vcol = cur.column();
                const std::string v = cur.name();
                if (instance.index_of(v)) {
                    throw ParseError("variable " + v + " declared twice", i + 1, vcol);
                }
                instance.add_variable(v);
            }
            continue;
        }
        if (head != "vars") {
            cur.expect("(");
        }
        auto it = arities.find(head);
        if (it == arities.end()) {
            throw ParseError("unknown relation " + head, i + 1, column);
        }
        std::vector<std::size_t> scope;
        do {
            const std::size_t vcol = cur.column();
            const std::string v = cur.name();
            auto idx = instance.index_of(v);
            if (!idx) {
                throw ParseError("undeclared variable " + v, i + 1, vcol);
            }
            scope.push_back(*idx);
        } while (cur.accept(","));
        cur.expect(")");
        cur.expect_end();
        if (scope.size() != it->second) {
            throw ArityError("line " + std::to_string(i + 1) + ": " + head + " has arity " +
                             std::to_string(it->second) + ", got " + std::to_string(scope.size()) + " arguments");
        }
        instance.add_constraint(head, std::move(scope));
    }
    return instance;
}

std::string format_instance(const Instance& instance) {
    std::string out = "vars";
    for (const auto& v : instance.variables()) {
        out += " " + v;
    }
    out += "\n";
    for (const auto& c : instance.constraints()) {
        out += c.relation + "(";
        for (std::size_t i = 0; i < c.scope.size(); ++i) {
            out += (i > 0 ? "," : "") + instance.variables()[c.scope[i]];
        }
        out += ")\n";
    }
    return out;
}

}  // namespace csplab::textio
