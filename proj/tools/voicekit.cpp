#include <csignal>
#include <iostream>

#include "CLI11.hpp"
#include "voicekit/service/commands.hpp"
#include "voicekit/service/http.hpp"

namespace {

voicekit::service::Service* g_service = nullptr;

void on_signal(int)
{
    if (g_service) {
        g_service->stop();
    }
}

} // namespace

int main(int argc, char** argv)
{
    using namespace voicekit;
    CLI::App app{"voicekit: image sonification codec, assessment harness and listening-test service"};
    app.require_subcommand(1);

    std::string image, scheme = "PRIMARY", out, wav, manifest, config_path, session_id, group;
    int rows = 64, cols = 64;

    auto* enc = app.add_subcommand("encode", "Encode a PGM image to a WAV clip");
    enc->add_option("--image", image, "Input P5 PGM")->required();
    enc->add_option("--scheme", scheme, "Preset name (PRIMARY, LONG, TANH) or scheme file");
    enc->add_option("--out", out, "Output WAV")->required();

    auto* dec = app.add_subcommand("decode", "Reconstruct an image from a WAV clip");
    dec->add_option("--wav", wav, "Input WAV")->required();
    dec->add_option("--scheme", scheme, "Preset name or scheme file");
    dec->add_option("--rows", rows, "Image rows")->required();
    dec->add_option("--cols", cols, "Image columns")->required();
    dec->add_option("--out", out, "Output PGM")->required();

    service::GenOptions gen;
    int gen_size = 0;
    auto* gs = app.add_subcommand("gen-stimuli", "Write a stimulus corpus and its manifest");
    gs->add_option("--kind", gen.kind, "lessons, objects or all")->check(CLI::IsMember({"lessons", "objects", "all"}));
    gs->add_option("--size", gen_size, "Image side in pixels (default 64 lessons, 32 objects)");
    gs->add_option("--seed", gen.seed, "Jitter seed");
    gs->add_option("--classes", gen.n_classes, "Object classes");
    gs->add_option("--per-class", gen.per_class, "Poses per object class");
    gs->add_option("--out", out, "Output directory")->required();

    service::EvalOptions eval;
    std::vector<std::string> schemes;
    auto* ev = app.add_subcommand("eval", "Machine assessment and comparison of encoding schemes");
    ev->add_option("--corpus", manifest, "Corpus manifest")->required();
    ev->add_option("--schemes", schemes, "Presets or scheme files (comma separated)")->required()->delimiter(',');
    ev->add_option("--out", out, "Report path (CSV written to <out>.csv)")->required();
    ev->add_option("--k", eval.params.k, "Neighbours");
    ev->add_option("--tau", eval.params.tau, "Posterior temperature");
    ev->add_option("--n-perm", eval.n_perm, "Permutations per pairwise test");
    ev->add_option("--seed", eval.seed, "Permutation seed");
    ev->add_option("--threads", eval.params.threads, "Worker threads (0: all cores)");

    auto* sv = app.add_subcommand("serve", "Run the HTTP service");
    sv->add_option("--config", config_path, "Configuration file")->required();

    auto* rp = app.add_subcommand("report", "Print a session report or a group aggregate");
    rp->add_option("--config", config_path, "Configuration file")->required();
    auto* rp_session = rp->add_option("--session", session_id, "Session id");
    auto* rp_group = rp->add_option("--group", group, "Scheme name");
    rp_session->excludes(rp_group);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*enc) {
            const auto frames = service::run_encode(image, scheme, out);
            std::cout << out << ": " << frames << " frames\n";
        } else if (*dec) {
            service::run_decode(wav, scheme, rows, cols, out);
            std::cout << out << "\n";
        } else if (*gs) {
            if (gen_size > 0) {
                gen.size = gen_size;
            }
            std::cout << service::run_gen_stimuli(gen, out) << "\n";
        } else if (*ev) {
            const auto cmp = service::run_eval(manifest, schemes, out, eval, std::cerr);
            std::cout << assess::comparison_csv(cmp);
        } else if (*sv) {
            auto svc = service::Service::from_config(service::load_config(config_path));
            const int port = svc->bind();
            g_service = svc.get();
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            std::cerr << "listening on " << svc->config().listen_host << ":" << port << "\n";
            svc->run();
        } else if (*rp) {
            const auto cfg = service::load_config(config_path);
            if (!session_id.empty()) {
                std::cout << service::run_report_session(cfg, session_id);
            } else if (!group.empty()) {
                std::cout << service::run_report_group(cfg, group);
            } else {
                throw InvalidArgument("report needs --session or --group");
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "voicekit: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
