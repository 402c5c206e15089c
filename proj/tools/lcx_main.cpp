#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "lcx/bench.hpp"
#include "lcx/frontier.hpp"
#include "lcx/gateway.hpp"
#include "lcx/world_io.hpp"

using namespace lcx;

namespace {

std::vector<std::uint64_t> parse_checkpoints(const std::string& text) {
    const auto colon = text.find(':');
    if (colon != std::string::npos) {
        return checkpoint_range(std::stoull(text.substr(0, colon)), std::stoull(text.substr(colon + 1)));
    }
    std::vector<std::uint64_t> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(std::stoull(item));
    }
    return out;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(Errc::Io, "cannot write " + path);
    return out;
}

struct MapArgs {
    double width = 200.0;
    double height = 200.0;
    int obstacles = 0;
    double occupancy = -1.0;
    double p_l = 0.0;
    std::uint64_t seed = 0;

    void add(CLI::App* app) {
        app->add_option("--width", width, "arena width in metres");
        app->add_option("--height", height, "arena height in metres");
        app->add_option("--obstacles", obstacles, "number of obstacles");
        app->add_option("--occupancy", occupancy, "target occupied fraction instead of a count");
        app->add_option("--p-l", p_l, "landmark destruction probability");
    }

    GeneratedMap generate() const {
        WorldConfig wc;
        wc.width = width;
        wc.height = height;
        return occupancy >= 0.0 ? generate_map_occupancy(wc, occupancy, p_l, seed)
                                : generate_map(wc, obstacles, p_l, seed);
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Landmark-complex multi-agent exploration toolkit"};
    app.require_subcommand(1);
    std::uint64_t seed = 0;
    app.add_option("--seed", seed, "base random seed");

    // genmap
    auto* genmap = app.add_subcommand("genmap", "generate a world with LPA landmarks");
    MapArgs gen_args;
    gen_args.add(genmap);
    std::string gen_out;
    genmap->add_option("--out", gen_out, "world JSON file")->required();

    // run
    auto* run = app.add_subcommand("run", "run one episode and write its log");
    MapArgs run_args;
    run_args.add(run);
    std::string run_world, run_out, policy = "frontier";
    std::size_t run_agents = 4;
    std::uint64_t run_max_steps = 20000;
    run->add_option("--world", run_world, "world JSON file instead of generating one");
    run->add_option("--policy", policy, "frontier | random | external")
        ->check(CLI::IsMember({"frontier", "random", "external"}));
    run->add_option("--agents", run_agents, "number of agents");
    run->add_option("--max-steps", run_max_steps, "step cap");
    run->add_option("--out", run_out, "CSV log file (stdout if omitted)");

    // bench
    auto* bench = app.add_subcommand("bench", "sweep conditions and aggregate curves");
    std::string conditions_file, out_dir = "bench_out", checkpoints = "50:3000", bench_policy = "frontier";
    int trials = 10;
    double bench_w = 200.0, bench_h = 200.0;
    std::uint64_t bench_max_steps = 20000;
    bench->add_option("--conditions", conditions_file, "JSON list of conditions")->required();
    bench->add_option("--policy", bench_policy, "frontier | random")->check(CLI::IsMember({"frontier", "random"}));
    bench->add_option("--trials", trials, "trials per condition");
    bench->add_option("--checkpoints", checkpoints, "step:last or a comma list of obs counts");
    bench->add_option("--out-dir", out_dir, "output directory");
    bench->add_option("--width", bench_w, "arena width");
    bench->add_option("--height", bench_h, "arena height");
    bench->add_option("--max-steps", bench_max_steps, "step cap per episode");

    // curriculum
    auto* curriculum = app.add_subcommand("curriculum", "print the episode schedule");
    std::uint64_t episodes = 200;
    std::string cur_out;
    curriculum->add_option("--episodes", episodes, "number of episodes");
    curriculum->add_option("--out", cur_out, "CSV file (stdout if omitted)");

    // serve
    auto* serve = app.add_subcommand("serve", "speak the line protocol");
    std::string mode = "env", serve_world;
    std::uint16_t port = 0;
    bool use_stdio = false;
    std::size_t sync_agents = 4;
    int sync_landmarks = -1;
    serve->add_option("--mode", mode, "env | sync")->check(CLI::IsMember({"env", "sync"}));
    serve->add_option("--port", port, "TCP port on 127.0.0.1 (0 picks one)");
    serve->add_flag("--stdio", use_stdio, "serve one session on stdin/stdout");
    serve->add_option("--world", serve_world, "fixed world (env) or landmark set (sync)");
    serve->add_option("--agents", sync_agents, "agents known to the sync server");
    serve->add_option("--landmarks", sync_landmarks, "sync: ids 0..N-1 when no world is given");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*genmap) {
            gen_args.seed = seed;
            const GeneratedMap map = gen_args.generate();
            save_world_file(gen_out, WorldDescription::from_world(map.world, seed));
            std::cout << "occupancy " << map.occupancy << "\n"
                      << "landmarks " << map.world.landmarks().size() << "\n"
                      << "remaining " << remaining_ids(map.world).size() << "\n";
        } else if (*run) {
            run_args.seed = seed;
            std::optional<World> world;
            if (!run_world.empty()) {
                world = load_world_file(run_world).to_world();
            } else if (policy != "external") {
                world = run_args.generate().world;
            }
            EpisodeParams params;
            params.n_agents = run_agents;
            params.max_steps = run_max_steps;
            EpisodeLog log;
            if (policy == "external") {
                if (run_out.empty()) throw Error(Errc::InvalidConfig, "--out is required with --policy external");
                GatewayOptions options;
                options.episode = params;
                options.fixed_world = world;
                EnvSession session(options);
                serve_stream(std::cin, std::cout, session);
                if (!session.episode()) throw Error(Errc::Protocol, "no episode was run");
                log = session.episode()->log();
            } else {
                Episode ep(*world, params, seed);
                std::unique_ptr<Policy> p;
                if (policy == "frontier") {
                    p = std::make_unique<FrontierPolicy>(derive_seed(seed, 3));
                } else {
                    p = std::make_unique<RandomPolicy>(derive_seed(seed, 3));
                }
                log = run_episode(ep, *p);
            }
            if (run_out.empty()) {
                log.write_csv(std::cout);
            } else {
                auto out = open_out(run_out);
                log.write_csv(out);
            }
        } else if (*bench) {
            std::ifstream in(conditions_file);
            if (!in) throw Error(Errc::Io, "cannot read " + conditions_file);
            BenchSpec spec;
            spec.policy = bench_policy;
            spec.trials = trials;
            spec.conditions = conditions_from_json(nlohmann::json::parse(in));
            spec.checkpoints = parse_checkpoints(checkpoints);
            spec.seed = seed;
            spec.width = bench_w;
            spec.height = bench_h;
            spec.episode.max_steps = bench_max_steps;
            const BenchResult result = run_bench(spec);
            std::filesystem::create_directories(out_dir);
            const std::filesystem::path dir(out_dir);
            {
                auto raw = open_out((dir / "raw.csv").string());
                write_raw_csv(raw, spec, result.trials);
                auto agg = open_out((dir / "aggregate.csv").string());
                write_aggregate_csv(agg, result.aggregate);
            }
            for (const char* metric : {"c0", "c1", "c2"}) {
                auto svg = open_out((dir / (std::string(metric) + ".svg")).string());
                svg << render_svg(result.aggregate, metric);
            }
            std::size_t failed = 0;
            for (const auto& t : result.trials) {
                if (!t.completed) {
                    ++failed;
                    std::cerr << "trial " << t.trial << " of " << condition_label(spec.conditions[t.condition])
                              << " failed: " << t.error << "\n";
                }
            }
            std::cout << "trials " << result.trials.size() << " failed " << failed << "\n";
        } else if (*curriculum) {
            CurriculumParams params;
            params.seed = seed;
            std::ostringstream csv;
            csv << "episode,stage,n_obstacles,p_l\n";
            for (std::uint64_t e = 0; e < episodes; ++e) {
                const ScheduleEntry s = schedule_for_episode(e, params);
                csv << e << ',' << s.stage << ',' << s.n_obstacles << ',' << s.p_l << '\n';
            }
            if (cur_out.empty()) {
                std::cout << csv.str();
            } else {
                auto out = open_out(cur_out);
                out << csv.str();
            }
        } else if (*serve) {
            HandlerFactory factory;
            std::unique_ptr<SyncServer> server;
            std::unique_ptr<SyncEndpoint> endpoint;
            if (mode == "env") {
                GatewayOptions options;
                if (!serve_world.empty()) options.fixed_world = load_world_file(serve_world).to_world();
                factory = [options] { return std::make_unique<EnvSession>(options); };
            } else {
                std::vector<LandmarkId> ids;
                if (!serve_world.empty()) {
                    ids = remaining_ids(load_world_file(serve_world).to_world());
                } else if (sync_landmarks >= 0) {
                    for (int i = 0; i < sync_landmarks; ++i) ids.push_back(static_cast<LandmarkId>(i));
                } else {
                    throw Error(Errc::InvalidConfig, "sync mode needs --world or --landmarks");
                }
                server = std::make_unique<SyncServer>(sync_agents, ids, 2);
                endpoint = std::make_unique<SyncEndpoint>(*server);
                factory = [&endpoint] { return std::make_unique<SyncLineHandler>(*endpoint); };
            }
            if (use_stdio) {
                auto handler = factory();
                serve_stream(std::cin, std::cout, *handler);
            } else {
                TcpLineServer tcp(port, factory);
                std::cout << "listening " << tcp.port() << std::endl;
                tcp.run();
            }
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
