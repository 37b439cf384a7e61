#include "csplab/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "csplab/consistency.hpp"
#include "csplab/errors.hpp"
#include "csplab/homog.hpp"
#include "csplab/polyengine.hpp"
#include "csplab/temporal.hpp"
#include "csplab/textio.hpp"

namespace csplab::cli {

namespace {

using textio::Template;

class Writer {
public:
    void line(const std::string& key, const std::string& value) { out_ << key << ": " << value << "\n"; }
    std::string str() const { return out_.str(); }

private:
    std::ostringstream out_;
};

const Instance& need_instance(const std::optional<Instance>& instance, const std::string& command) {
    if (!instance) {
        throw ParameterError(command + " needs an instance file");
    }
    return *instance;
}

std::string sign_string(const temporal::SignedWeakOrderType& pattern, std::size_t from, std::size_t count) {
    std::string out;
    for (std::size_t p = from; p < from + count; ++p) {
        const int s = pattern.sign(p);
        out += s < 0 ? '-' : (s == 0 ? '0' : '+');
    }
    return out;
}

std::string format_levels(const temporal::WeakOrderType& solution, const std::vector<std::string>& names) {
    std::string out;
    for (const auto& level : temporal::levels_of(solution)) {
        out += "[";
        for (std::size_t i = 0; i < level.size(); ++i) {
            out += (i > 0 ? "," : "") + names[level[i]];
        }
        out += "]";
    }
    return out;
}

std::string format_behavior(const homog::PairBehavior& b) {
    const char* glyphs = b.oriented() ? "=FB" : "=EN";
    std::string out;
    for (auto l : b.table()) {
        out += glyphs[l];
    }
    return out;
}

std::string format_assignment(const Assignment& a, const std::vector<std::string>& names) {
    std::string out;
    for (std::size_t v = 0; v < a.size(); ++v) {
        out += (v > 0 ? " " : "") + names[v] + "=" + std::to_string(a[v]);
    }
    return out;
}

temporal::MasterMode parse_mode(const std::string& text) {
    switch (temporal::parse_temporal_op(text)) {
        case temporal::TemporalOp::PP: return temporal::MasterMode::PP;
        case temporal::TemporalOp::LL: return temporal::MasterMode::LL;
        case temporal::TemporalOp::DualPP: return temporal::MasterMode::DualPP;
        case temporal::TemporalOp::DualLL: return temporal::MasterMode::DualLL;
        default: throw ParameterError("--mode must be pp, ll, dual-pp or dual-ll");
    }
}

int classify(const Template& tmpl, Writer& w) {
    if (const auto* t = std::get_if<temporal::TemporalTemplate>(&tmpl)) {
        const auto verdict = temporal::classify_temporal(*t);
        w.line("verdict", verdict.np_complete ? "NP_COMPLETE" : "P");
        if (verdict.mode) {
            w.line("mode", to_string(*verdict.mode));
        }
        for (const auto& [mode, violation] : verdict.violations) {
            const auto& [name, wit] = violation;
            const std::size_t k = wit.first.arity();
            w.line("violation " + to_string(mode),
                   name + "; a: " + textio::format_temporal_type(wit.first) + " signs " +
                       sign_string(wit.joint, 0, k) + "; b: " + textio::format_temporal_type(wit.second) +
                       " signs " + sign_string(wit.joint, k, k) +
                       "; joint: " + textio::format_temporal_type(wit.joint.order()) +
                       "; image: " + textio::format_temporal_type(wit.image));
        }
        return verdict.np_complete ? kExitNegative : kExitDone;
    }
    if (const auto* h = std::get_if<homog::HomTemplate>(&tmpl)) {
        const auto verdict = homog::classify_reduct(*h);
        w.line("verdict", to_string(verdict.kind));
        for (const auto& [shape, search] : verdict.searches) {
            std::string result = search.behavior ? "found" : "NONE";
            if (search.exhaustive_certificate) {
                result += " (exhaustive over " + std::to_string(search.free_cells) + " free cells)";
            }
            w.line("search " + to_string(shape), result);
        }
        if (verdict.width_undetermined) {
            w.line("width", "UNDETERMINED");
        }
        if (verdict.witness) {
            w.line("witness", to_string(*verdict.shape));
            w.line("table", format_behavior(*verdict.witness));
        }
        const bool negative =
            verdict.kind == homog::VerdictKind::NpComplete || verdict.kind == homog::VerdictKind::EqualityNpc;
        return negative ? kExitNegative : kExitDone;
    }
    const auto& f = std::get<FiniteStructure>(tmpl);
    if (f.domain_size() != 2) {
        throw ParameterError("classify on finite templates needs a two-element domain");
    }
    const auto classes = boolean_classify(f);
    std::string names;
    for (auto c : classes) {
        names += (names.empty() ? "" : " ") + to_string(c);
    }
    const bool trivial = classes.count(BooleanClass::Trivial) != 0;
    w.line("verdict", trivial ? "NP_COMPLETE" : "P");
    w.line("classes", names);
    return trivial ? kExitNegative : kExitDone;
}

int solve(const Template& tmpl, const Instance& instance, const Flags& flags, Writer& w) {
    if (const auto* t = std::get_if<temporal::TemporalTemplate>(&tmpl)) {
        const auto problem = temporal::TemporalProblem::bind(instance, *t);
        std::optional<temporal::MasterMode> mode;
        if (flags.mode) {
            mode = parse_mode(*flags.mode);
        } else {
            mode = temporal::classify_temporal(*t).mode;
        }
        std::optional<temporal::WeakOrderType> solution;
        if (mode) {
            w.line("method", to_string(*mode));
            solution = temporal::solve_master(instance, *t, *mode);
        } else {
            w.line("method", "brute");
            solution = temporal::brute_oracle(problem);
        }
        w.line("result", solution ? "SAT" : "UNSAT");
        if (solution) {
            w.line("levels", format_levels(*solution, instance.variables()));
        }
        if (flags.oracle) {
            const auto expected = temporal::brute_oracle(problem);
            w.line("oracle", expected ? "SAT" : "UNSAT");
            const bool agrees = expected.has_value() == solution.has_value() &&
                                (!solution || problem.satisfied_by(*solution));
            w.line("oracle-agrees", agrees ? "yes" : "no");
            if (!agrees) {
                return kExitInputError;
            }
        }
        return solution ? kExitDone : kExitNegative;
    }
    if (const auto* h = std::get_if<homog::HomTemplate>(&tmpl)) {
        w.line("method", "brute");
        const auto solution = homog::solve_instance_brute(instance, *h);
        w.line("result", solution ? "SAT" : "UNSAT");
        if (solution) {
            w.line("labeling", textio::format_labeled_type({instance.num_variables(), *solution}, h->base,
                                                           instance.variables()));
        }
        return solution ? kExitDone : kExitNegative;
    }
    const auto& f = std::get<FiniteStructure>(tmpl);
    check_signature(instance, f);
    std::optional<BooleanClass> cls;
    if (f.domain_size() == 2) {
        cls = solving_class(boolean_classify(f));
    }
    w.line("method", cls ? to_string(*cls) : "backtracking");
    const auto solution = cls ? schaefer_solve(instance, f, *cls) : hom_search(instance, f);
    w.line("result", solution ? "SAT" : "UNSAT");
    if (solution) {
        w.line("assignment", format_assignment(*solution, instance.variables()));
    }
    if (flags.oracle) {
        const auto expected = hom_search(instance, f);
        w.line("oracle", expected ? "SAT" : "UNSAT");
        const bool agrees = expected.has_value() == solution.has_value();
        w.line("oracle-agrees", agrees ? "yes" : "no");
        if (!agrees) {
            return kExitInputError;
        }
    }
    return solution ? kExitDone : kExitNegative;
}

const temporal::TemporalTemplate& need_temporal(const Template& tmpl, const std::string& command) {
    const auto* t = std::get_if<temporal::TemporalTemplate>(&tmpl);
    if (t == nullptr) {
        throw ParameterError(command + " needs a temporal template");
    }
    return *t;
}

int freesets(const Template& tmpl, const Instance& instance, Writer& w) {
    const auto problem = temporal::TemporalProblem::bind(instance, need_temporal(tmpl, "freesets"));
    for (std::size_t v = 0; v < problem.num_variables(); ++v) {
        const auto set = temporal::free_set_containing(problem, v);
        std::string text = "NONE";
        if (set) {
            text = "{";
            for (std::size_t i = 0; i < set->size(); ++i) {
                text += (i > 0 ? "," : "") + instance.variables()[(*set)[i]];
            }
            text += "}";
        }
        w.line("free " + instance.variables()[v], text);
    }
    return kExitDone;
}

int afin(const Template& tmpl, Writer& w) {
    const auto structure = temporal::build_afin(need_temporal(tmpl, "afin"));
    for (const auto& [name, rel] : structure.relations()) {
        std::string text;
        for (const auto& tuple : rel.tuples) {
            text += text.empty() ? "(" : " (";
            for (std::size_t i = 0; i < tuple.size(); ++i) {
                text += (i > 0 ? "," : "") + std::string(tuple[i] == temporal::kZero ? "Z" : "P");
            }
            text += ")";
        }
        w.line(name, text);
    }
    return kExitDone;
}

int polysearch(const Template& tmpl, const Flags& flags, Writer& w) {
    const auto* f = std::get_if<FiniteStructure>(&tmpl);
    if (f == nullptr) {
        throw ParameterError("polysearch needs a finite template");
    }
    const auto identities = parse_identity_system(flags.identities);
    int arity = flags.arity != 0 ? flags.arity : identities.required_arity();
    if (arity == 0) {
        throw ParameterError("--arity is required for " + identities.name());
    }
    w.line("identities", identities.name());
    w.line("arity", std::to_string(arity));
    const auto op = find_polymorphism(*f, identities, arity);
    w.line("result", op ? "FOUND" : "NONE");
    if (op) {
        std::string text;
        for (std::size_t i = 0; i < op->table().size(); ++i) {
            text += (i > 0 ? " " : "") + std::to_string(op->table()[i]);
        }
        w.line("table", text);
    }
    return op ? kExitDone : kExitNegative;
}

template <class State>
int report_state(const std::optional<State>& state, int k, int l, Writer& w) {
    w.line("k", std::to_string(k));
    w.line("l", std::to_string(l));
    if (!state) {
        w.line("result", "EMPTY_DERIVED");
        return kExitNegative;
    }
    w.line("result", "CONSISTENT");
    w.line("sets", std::to_string(state->local.size()));
    w.line("codes", std::to_string(state->total_codes()));
    return kExitDone;
}

int consistency(const Template& tmpl, const Instance& instance, const Flags& flags, Writer& w) {
    const auto [k, l] = flags.kl.value_or(std::make_pair(2, 3));
    if (const auto* t = std::get_if<temporal::TemporalTemplate>(&tmpl)) {
        return report_state(temporal::establish_kl(temporal::TemporalProblem::bind(instance, *t), k, l), k, l, w);
    }
    if (const auto* h = std::get_if<homog::HomTemplate>(&tmpl)) {
        return report_state(homog::establish_kl(instance, *h, k, l), k, l, w);
    }
    return report_state(establish_kl(instance, std::get<FiniteStructure>(tmpl), k, l), k, l, w);
}

int oracle(const Template& tmpl, const Instance& instance, Writer& w) {
    w.line("method", "brute");
    if (const auto* t = std::get_if<temporal::TemporalTemplate>(&tmpl)) {
        const auto solution = temporal::brute_oracle(temporal::TemporalProblem::bind(instance, *t));
        w.line("result", solution ? "SAT" : "UNSAT");
        if (solution) {
            w.line("levels", format_levels(*solution, instance.variables()));
        }
        return solution ? kExitDone : kExitNegative;
    }
    if (const auto* h = std::get_if<homog::HomTemplate>(&tmpl)) {
        const auto solution = homog::solve_instance_brute(instance, *h);
        w.line("result", solution ? "SAT" : "UNSAT");
        if (solution) {
            w.line("labeling", textio::format_labeled_type({instance.num_variables(), *solution}, h->base,
                                                           instance.variables()));
        }
        return solution ? kExitDone : kExitNegative;
    }
    const auto& f = std::get<FiniteStructure>(tmpl);
    check_signature(instance, f);
    const auto solution = hom_search(instance, f);
    w.line("result", solution ? "SAT" : "UNSAT");
    if (solution) {
        w.line("assignment", format_assignment(*solution, instance.variables()));
    }
    return solution ? kExitDone : kExitNegative;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParameterError("cannot read " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

std::pair<int, int> parse_kl(const std::string& text) {
    const auto comma = text.find(',');
    try {
        if (comma == std::string::npos) {
            throw std::invalid_argument("no comma");
        }
        std::size_t used_k = 0;
        std::size_t used_l = 0;
        const std::string ks = text.substr(0, comma);
        const std::string ls = text.substr(comma + 1);
        const int k = std::stoi(ks, &used_k);
        const int l = std::stoi(ls, &used_l);
        if (used_k != ks.size() || used_l != ls.size()) {
            throw std::invalid_argument("trailing text");
        }
        return {k, l};
    } catch (const std::logic_error&) {
        throw ParameterError("--kl expects K,L, got '" + text + "'");
    }
}

Report run(const std::string& command, const std::string& template_text,
           const std::optional<std::string>& instance_text, const Flags& flags) {
    Writer w;
    Report report;
    try {
        const Template tmpl = textio::parse_template(template_text);
        std::optional<Instance> instance;
        if (instance_text) {
            instance = textio::parse_instance(*instance_text, tmpl);
        }
        w.line("command", command);
        w.line("base", textio::base_name(tmpl));
        if (command == "classify") {
            report.exit_code = classify(tmpl, w);
        } else if (command == "solve") {
            report.exit_code = solve(tmpl, need_instance(instance, command), flags, w);
        } else if (command == "freesets") {
            report.exit_code = freesets(tmpl, need_instance(instance, command), w);
        } else if (command == "afin") {
            report.exit_code = afin(tmpl, w);
        } else if (command == "polysearch") {
            report.exit_code = polysearch(tmpl, flags, w);
        } else if (command == "consistency") {
            report.exit_code = consistency(tmpl, need_instance(instance, command), flags, w);
        } else if (command == "oracle") {
            report.exit_code = oracle(tmpl, need_instance(instance, command), w);
        } else {
            throw ParameterError("unknown command " + command);
        }
        report.text = w.str();
    } catch (const Error& e) {
        report.exit_code = kExitInputError;
        report.text = w.str() + "error: " + e.what() + "\n";
    }
    return report;
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Constraint satisfaction laboratory"};
    std::string command;
    std::string template_path;
    std::string instance_path;
    std::string kl;
    std::string mode;
    Flags flags;
    app.add_option("command", command, "classify | solve | freesets | afin | polysearch | consistency | oracle")
        ->required()
        ->check(CLI::IsMember({"classify", "solve", "freesets", "afin", "polysearch", "consistency", "oracle"}));
    app.add_option("template", template_path, "template file")->required();
    app.add_option("instance", instance_path, "instance file");
    app.add_option("--kl", kl, "consistency parameters K,L (default 2,3)");
    app.add_option("--mode", mode, "temporal master: pp, ll, dual-pp, dual-ll");
    app.add_flag("--oracle", flags.oracle, "cross-check solve against the brute-force oracle");
    app.add_option("--identities", flags.identities, "identity system for polysearch (default siggers)");
    app.add_option("--arity", flags.arity, "operation arity for polysearch");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitInputError;
    }
    try {
        if (!kl.empty()) {
            flags.kl = parse_kl(kl);
        }
        if (!mode.empty()) {
            flags.mode = mode;
        }
        std::optional<std::string> instance_text;
        if (!instance_path.empty()) {
            instance_text = read_file(instance_path);
        }
        const Report report = run(command, read_file(template_path), instance_text, flags);
        out << report.text;
        return report.exit_code;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}

}  // namespace csplab::cli
