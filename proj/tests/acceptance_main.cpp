// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.
// Exit status 0 iff every selected criterion passes.

#include <algorithm>
#include <iostream>

#include "CLI11.hpp"
#include "cubicvs/acceptance.hpp"
#include "cubicvs/table_cache.hpp"

int main(int argc, char** argv) {
    CLI::App app{"cubicvs acceptance suite"};
    std::vector<std::string> only;
    std::uint64_t seed = cubicvs::AcceptanceContext{}.seed;
    bool json = false;
    app.add_option("--only", only, "criterion numbers or names");
    app.add_option("--seed", seed);
    app.add_flag("--json", json, "also print one record per criterion");
    CLI11_PARSE(app, argc, argv);

    std::vector<int> ids;
    for (const auto& key : only) {
        const auto* c = cubicvs::find_criterion(key);
        if (!c) {
            std::cerr << "unknown criterion: " << key << "\n";
            return 2;
        }
        if (std::find(ids.begin(), ids.end(), c->id) == ids.end()) ids.push_back(c->id);
    }
    if (ids.empty())
        for (const auto& c : cubicvs::acceptance_criteria()) ids.push_back(c.id);

    cubicvs::TableCache cache(cubicvs::TableCache::default_dir());
    cache.set_warning_sink([](const std::string& w) { std::cerr << "warning: " << w << "\n"; });
    cubicvs::AcceptanceContext ctx;
    ctx.cache = &cache;
    ctx.seed = seed;
    ctx.progress = [](const std::string& m) { std::cerr << "  .. " << m << "\n"; };

    int failed = 0;
    for (int id : ids) {
        const auto r = cubicvs::run_criterion(id, ctx);
        std::cout << cubicvs::summary_line(r) << std::endl;
        if (json) std::cout << cubicvs::to_record(r, false).to_line() << std::endl;
        if (!r.passed) ++failed;
    }
    std::cout << (ids.size() - failed) << "/" << ids.size() << " criteria passed" << std::endl;
    return failed ? 1 : 0;
}
