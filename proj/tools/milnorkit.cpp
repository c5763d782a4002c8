#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include <milnorkit/errors.hpp>
#include <milnorkit/report.hpp>

using namespace milnorkit;

namespace
{

struct Args {
    std::string spec;
    std::string arc;
    std::string t;
    bool json = false;
    std::optional<int> order, cap, budget;
    std::optional<double> epsilon;
    std::optional<std::uint64_t> seed;
};

TaskSpec make_task(const std::string &kind, const Args &a)
{
    TaskSpec task;
    task.kind = kind;
    task.text = kind;
    if (!a.arc.empty()) {
        task.positional.push_back(a.arc);
        task.text += " " + a.arc;
    }
    if (!a.t.empty()) {
        task.options["t"] = a.t;
        task.text += " t=" + a.t;
    }
    return task;
}

int emit(const Report &rep, bool json)
{
    std::cout << (json ? render_json(rep) : render_text(rep));
    return exit_code(rep);
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"milnorkit: Milnor numbers, Whitney conditions and vanishing folds of polynomial families"};
    app.require_subcommand(1);
    Args a;

    auto common = [&a](CLI::App *sub, bool with_arc) {
        sub->add_option("spec", a.spec, "bundled spec name or spec file")->required();
        if (with_arc) {
            sub->add_option("arc", a.arc, "arc name (defaults to the only arc)");
        }
        sub->add_option("--order", a.order, "series truncation order");
        sub->add_option("--cap", a.cap, "degree cap for the local algebra");
        sub->add_option("--budget", a.budget, "radius search starts");
        sub->add_option("--epsilon", a.epsilon, "radius search bound on rho");
        sub->add_option("--seed", a.seed, "radius search seed");
        sub->add_option("--t", a.t, "parameter values, comma separated");
        sub->add_flag("--json", a.json, "machine-readable output");
    };
    auto *mu = app.add_subcommand("mu", "Milnor number");
    common(mu, false);
    auto *whitney = app.add_subcommand("whitney", "conditions (a) and (b') along an arc");
    common(whitney, true);
    auto *fold = app.add_subcommand("fold", "vanishing fold test along an arc");
    common(fold, true);
    auto *transform = app.add_subcommand("transform", "fold transform built from a failing arc");
    common(transform, true);
    auto *radius = app.add_subcommand("radius", "numeric search for kinks");
    common(radius, false);
    auto *report = app.add_subcommand("report", "run every task of a spec");
    common(report, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        const FamilySpec spec = load_spec(a.spec);
        const ReportOptions opts{a.order, a.cap, a.budget, a.epsilon, a.seed};
        if (report->parsed()) {
            return emit(run_report(spec, opts), a.json);
        }
        Report rep;
        rep.family = spec.name;
        std::vector<std::string> kinds;
        if (mu->parsed()) {
            if (spec.weights) {
                kinds.push_back("mu-weighted");
            }
            kinds.push_back("mu-local");
        } else if (whitney->parsed()) {
            kinds.push_back("whitney");
        } else if (fold->parsed()) {
            kinds.push_back("fold");
        } else if (transform->parsed()) {
            kinds.push_back("transform");
        } else if (radius->parsed()) {
            kinds.push_back("radius");
        }
        for (const auto &k : kinds) {
            rep.tasks.push_back(run_task(spec, make_task(k, a), rep.tasks.size() + 1, opts));
        }
        return emit(rep, a.json);
    } catch (const std::exception &e) {
        std::cerr << "milnorkit: " << e.what() << "\n";
        return 1;
    }
}
