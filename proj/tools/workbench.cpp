// workbench: build compact subsets of [0,1]^n as digit automata and query
// their geometry. See README.md for the expression and query languages.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "workbench/eval.hpp"

namespace {

int run_eval(const std::string& text, const std::string& out_path, std::size_t cap) {
    workbench::RunOptions opt;
    opt.state_cap = cap;
    workbench::Expr e = workbench::parse_expr(text);
    workbench::SafetyAutomaton a = workbench::evaluate(e, opt);
    if (out_path.empty())
        workbench::save(a, std::cout);
    else
        workbench::save_file(a, out_path);
    return 0;
}

int run_query(const std::string& text, const workbench::RunOptions& opt) {
    workbench::Query q = workbench::parse_query(text);
    std::cout << workbench::run(q, opt);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"workbench: compact automatic subsets of [0,1]^n"};
    app.require_subcommand(1);

    std::string expr_text, out_path;
    std::size_t cap = workbench::kDefaultStateCap;
    auto* eval_cmd = app.add_subcommand("eval", "evaluate a set expression to an automaton file");
    eval_cmd->add_option("expr", expr_text, "set expression, e.g. 'union(cantor, box(3, [0, 1/9]))'")
        ->required();
    eval_cmd->add_option("--out", out_path, "output file (stdout when omitted)");
    eval_cmd->add_option("--cap", cap, "state cap for constructions");

    std::string query_text;
    workbench::RunOptions opt;
    auto* query_cmd = app.add_subcommand("query", "run a query and print a report");
    query_cmd->add_option("query", query_text, "query, e.g. 'dim(product(cantor, cantor))'")
        ->required();
    query_cmd->add_option("--tol", opt.tol, "tolerance for measure-like queries");
    query_cmd->add_option("--seed", opt.seed, "seed for randomized queries");
    query_cmd->add_option("--depth", opt.prefix, "enumeration prefix for order gadgets");
    query_cmd->add_option("--samples", opt.sample_count, "sample size for scans");
    query_cmd->add_option("--cap", opt.state_cap, "state cap for constructions");
    query_cmd->add_option("--csv", opt.csv_path, "write scan tables as CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*eval_cmd) return run_eval(expr_text, out_path, cap);
        return run_query(query_text, opt);
    } catch (const workbench::resource_limit_error& e) {
        std::cerr << "resource limit: " << e.what() << '\n';
        return 2;
    } catch (const workbench::parse_error& e) {
        std::cerr << "parse error at " << e.line << ':' << e.column << ": " << e.what() << '\n';
        return 1;
    } catch (const workbench::error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
