#include "fowin/difftest.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace fowin;
using json = nlohmann::ordered_json;

constexpr int exit_ok = 0;
constexpr int exit_violation = 1;
constexpr int exit_usage = 2;
constexpr int exit_domain = 3;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// What a subcommand produces: text for humans, an object for --format json, and an exit status.
struct Output {
    std::string text;
    json data = json::object();
    int status = exit_ok;
};

// Circuit files must pass validation; a failure is reported as malformed input.
Circuit load_circuit(const std::string& path) {
    Circuit c = read_circuit(slurp(path));
    auto diags = validate(c);
    if (!diags.empty()) throw ParseError(path + ": " + to_string(diags.front()));
    return c;
}

Output single(const std::string& key, const std::string& value) {
    Output o;
    o.text = value;
    if (o.text.empty() || o.text.back() != '\n') o.text += "\n";
    o.data[key] = value;
    return o;
}

Output boolean(bool value) {
    Output o;
    o.text = value ? "true\n" : "false\n";
    o.data["value"] = value;
    return o;
}

Circuit single_input_family(const Circuit& c, std::size_t n) {
    if (n != c.input_length)
        throw DomainError("circuit has input length " + std::to_string(c.input_length) + ", asked for " + std::to_string(n));
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Count winning strategies and proof trees; compile between formulas and circuits.\n"
                 "Input strings are read left to right: position 0 is the first character.",
                 "fowin"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string format = "text";
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));

    std::string formula_path, formula2_path, circuit_path, circuit2_path, interp_path, aux_path, structure_out;
    std::string input;
    std::size_t n = 0, m = 0, budget = 8, max_n = 4;
    std::uint64_t seed = 1;
    std::string method = "residual";
    std::vector<std::size_t> coeffs;
    std::vector<std::string> injected;

    auto add_input = [&](CLI::App* sub) { sub->add_option("--input", input, "Input bit string")->required(); };
    auto add_n = [&](CLI::App* sub) { sub->add_option("--n", n, "Input length")->required(); };

    std::function<Output()> action;

    auto* count_win_cmd = app.add_subcommand("count-win", "Count winning strategies of a prenex sentence on a word");
    count_win_cmd->add_option("formula", formula_path, "Formula file")->required();
    add_input(count_win_cmd);
    count_win_cmd->add_option("--aux", aux_path, "Auxiliary structure file");
    count_win_cmd->add_option("--method", method, "Counting method")->check(CLI::IsMember({"residual", "nested", "gametree"}));
    count_win_cmd->callback([&] {
        action = [&] {
            Formula phi = parse_formula(slurp(formula_path));
            InterpretationFamily aux;
            if (!aux_path.empty()) aux = InterpretationFamily::constant(read_structure(slurp(aux_path)));
            Structure a = word_model(input);
            Count c = method == "nested"     ? count_win_nested(phi, a, aux)
                      : method == "gametree" ? count_win_gametree(phi, a, aux)
                                             : count_win(phi, a, aux);
            return single("count", to_decimal(c));
        };
    });

    auto* prooftrees_cmd = app.add_subcommand("count-prooftrees", "Count proof trees of a circuit on a word");
    prooftrees_cmd->add_option("circuit", circuit_path, "Circuit file")->required();
    add_input(prooftrees_cmd);
    prooftrees_cmd->callback([&] {
        action = [&] {
            Circuit c = load_circuit(circuit_path);
            return single("count", to_decimal(count_proof_trees(c, input)));
        };
    });

    auto* skolem_cmd = app.add_subcommand("count-skolem", "Count Skolem function tuples of an exists-forall-exists sentence");
    skolem_cmd->add_option("formula", formula_path, "Formula file")->required();
    add_input(skolem_cmd);
    skolem_cmd->add_option("--max-n", max_n, "Largest input length to enumerate");
    skolem_cmd->callback([&] {
        action = [&] {
            Guards g;
            g.skolem_max_n = max_n;
            return single("count", to_decimal(count_skolem(parse_formula(slurp(formula_path)), word_model(input), {}, g)));
        };
    });

    auto* compile_cmd = app.add_subcommand("compile", "Compile a prenex sentence to a circuit for input length n");
    compile_cmd->add_option("formula", formula_path, "Formula file")->required();
    add_n(compile_cmd);
    compile_cmd->callback([&] {
        action = [&] { return single("circuit", write_circuit(formula_to_circuit(parse_formula(slurp(formula_path)), n))); };
    });

    auto* extract_cmd = app.add_subcommand("extract-formula", "Formula and circuit structure for an alternating circuit");
    extract_cmd->add_option("circuit", circuit_path, "Circuit file")->required();
    extract_cmd->add_option("--structure-out", structure_out, "Write the circuit structure here instead of stdout");
    extract_cmd->callback([&] {
        action = [&] {
            Circuit c = load_circuit(circuit_path);
            Extraction e = extract_formula(c);
            Output o;
            std::string formula = to_text(e.formula), structure = write_structure(e.structure);
            o.data["formula"] = formula;
            o.data["structure"] = structure;
            o.text = formula + "\n";
            if (structure_out.empty()) {
                o.text += structure;
            } else {
                std::ofstream out(structure_out, std::ios::binary);
                if (!out) throw ParseError("cannot write " + structure_out);
                out << structure;
            }
            return o;
        };
    });

    auto* ugen_cmd = app.add_subcommand("uniform-gen", "Uniform family description for a prenex sentence");
    ugen_cmd->add_option("formula", formula_path, "Formula file")->required();
    ugen_cmd->callback([&] {
        action = [&] {
            return single("description", write_uniform_description(uniform_family_for_formula(parse_formula(slurp(formula_path)))));
        };
    });

    std::string description_path;
    auto* uinst_cmd = app.add_subcommand("uniform-instantiate", "Circuit of a uniform family at input length n");
    uinst_cmd->add_option("description", description_path, "Uniform description file")->required();
    add_n(uinst_cmd);
    uinst_cmd->callback([&] {
        action = [&] {
            return single("circuit", write_circuit(instantiate_uniform(read_uniform_description(slurp(description_path)), n)));
        };
    });

    auto* apply_cmd = app.add_subcommand("apply-interp", "Apply an interpretation to a word model");
    apply_cmd->add_option("interpretation", interp_path, "Interpretation file")->required();
    add_input(apply_cmd);
    apply_cmd->callback([&] {
        action = [&] {
            auto s = apply_interpretation(read_interpretation(slurp(interp_path)), word_model(input));
            return single("structure", write_structure(s.structure));
        };
    });

    auto* subst_cmd = app.add_subcommand("substitute", "Rewrite a sentence through an interpretation");
    subst_cmd->add_option("interpretation", interp_path, "Interpretation file")->required();
    subst_cmd->add_option("formula", formula_path, "Formula file")->required();
    subst_cmd->callback([&] {
        action = [&] {
            FOInterpretation I = preprocess(read_interpretation(slurp(interp_path)));
            return single("formula", to_text(substitute_interpretation(parse_formula(slurp(formula_path)), I)));
        };
    });

    auto* concat_cmd = app.add_subcommand("padded-concat", "Circuit counting f * 2^p + g");
    concat_cmd->add_option("f", circuit_path, "Circuit file for f")->required();
    concat_cmd->add_option("g", circuit2_path, "Circuit file for g")->required();
    concat_cmd->add_option("--poly", coeffs, "Coefficients of p(n), constant first; default is the bound of g");
    concat_cmd->callback([&] {
        action = [&] {
            Circuit fc = load_circuit(circuit_path), gc = load_circuit(circuit2_path);
            if (fc.input_length != gc.input_length) throw DomainError("f and g have different input lengths");
            CircuitFamily f{[fc](std::size_t k) { return single_input_family(fc, k); }};
            CircuitFamily g{[gc](std::size_t k) { return single_input_family(gc, k); }};
            CircuitFamily h = coeffs.empty() ? padded_concat(f, g) : padded_concat(f, g, coeffs);
            return single("circuit", write_circuit(h.at(fc.input_length)));
        };
    });

    auto* focw_cmd = app.add_subcommand("focw-eval", "Evaluate a sentence with counting-bit atoms on a word");
    focw_cmd->add_option("formula", formula_path, "Formula file")->required();
    add_input(focw_cmd);
    focw_cmd->callback([&] { action = [&] { return boolean(focw_evaluate(parse_formula(slurp(formula_path)), input)); }; });

    auto* compare_cmd = app.add_subcommand("compare", "Decide count(psi1) > count(psi2) with the comparison formula");
    compare_cmd->add_option("psi1", formula_path, "First sentence file")->required();
    compare_cmd->add_option("psi2", formula2_path, "Second sentence file")->required();
    add_input(compare_cmd);
    compare_cmd->add_option("--m", m, "Tuple width; default is the smallest valid one");
    compare_cmd->callback([&] {
        action = [&] {
            Formula p1 = parse_formula(slurp(formula_path)), p2 = parse_formula(slurp(formula2_path));
            std::size_t width = m ? m : comparison_width(p1, p2, input.size());
            return boolean(compare_counts_focw(p1, p2, width, input));
        };
    });

    auto* inline_cmd = app.add_subcommand("inline-oracle", "Compile a counting-bit sentence and replace its oracle gates");
    inline_cmd->add_option("formula", formula_path, "Formula file")->required();
    add_n(inline_cmd);
    inline_cmd->callback([&] {
        action = [&] {
            auto oc = focw_to_oracle_circuit(parse_formula(slurp(formula_path)), n);
            return single("circuit", write_circuit(inline_oracle(oc.circuit, dnf_decider(oc.oracle))));
        };
    });

    auto* diff_cmd = app.add_subcommand("difftest", "Run the seeded cross-checks over all words up to --max-n");
    diff_cmd->add_option("--seed", seed, "Corpus seed");
    diff_cmd->add_option("--budget", budget, "Random items per corpus");
    diff_cmd->add_option("--max-n", max_n, "Longest input length")->check(CLI::Range(1, 4));
    diff_cmd->add_option("--inject", injected, "Extra circuit files to check");
    diff_cmd->callback([&] {
        action = [&] {
            DifftestOptions opt;
            opt.seed = seed;
            opt.budget = budget;
            opt.max_n = max_n;
            for (const auto& path : injected) opt.injected.push_back(read_circuit(slurp(path)));
            DifftestReport r = run_difftest(opt);
            Output o;
            o.text = format_report(r);
            o.data["seed"] = r.seed;
            o.data["budget"] = r.budget;
            o.data["checks"] = json::array();
            for (const auto& c : r.checks) {
                json j{{"name", c.name}, {"cases", c.cases}, {"failures", c.failures}};
                if (c.failures) j["counterexample"] = c.counterexample;
                o.data["checks"].push_back(j);
            }
            o.data["ok"] = r.ok();
            o.status = r.ok() ? exit_ok : exit_violation;
            return o;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    auto fail = [&](const std::string& kind, const std::string& what, int status) {
        if (format == "json")
            std::cout << json{{"error", kind}, {"message", what}}.dump(2) << "\n";
        else
            std::cerr << "fowin: " << kind << " error: " << what << "\n";
        return status;
    };
    try {
        Output o = action();
        if (format == "json")
            std::cout << o.data.dump(2) << "\n";
        else
            std::cout << o.text;
        return o.status;
    } catch (const ParseError& e) {
        return fail("parse", e.what(), exit_usage);
    } catch (const DomainError& e) {
        return fail("domain", e.what(), exit_domain);
    } catch (const ConsistencyError& e) {
        return fail("consistency", e.what(), exit_violation);
    }
}
