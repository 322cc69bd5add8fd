// Command-line front end: exact Kauffman bracket skein module calculations for
// links in surface x S^1 presented by arrow diagrams.
//
// Exit codes: 0 success (verify: all trials OK), 1 input or usage error,
// 2 verification failure.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kbsm/oracle.hpp"

namespace {

kbsm::Surface parse_surface(const std::string& s) { return kbsm::surface_from_name(s); }

kbsm::ReduceOptions trace_options(bool trace) {
    kbsm::ReduceOptions opt;
    if (trace)
        opt.trace = [](const std::string& rule, const kbsm::Word& in, const kbsm::Element& out) {
            std::cerr << "RULE " << rule << " : " << in.str() << " => " << out.str() << "\n";
        };
    return opt;
}

std::vector<kbsm::MoveKind> parse_moves(const std::string& list) {
    std::vector<kbsm::MoveKind> out;
    std::string cur;
    auto flush = [&] {
        if (cur.empty()) return;
        if (cur == "all") {
            out = {kbsm::MoveKind::O1Pos, kbsm::MoveKind::O1Neg, kbsm::MoveKind::O2,
                   kbsm::MoveKind::O3,    kbsm::MoveKind::O4,    kbsm::MoveKind::O5};
        } else if (cur == "omega1") {
            out.push_back(kbsm::MoveKind::O1Pos);
            out.push_back(kbsm::MoveKind::O1Neg);
        } else if (cur == "omega2") {
            out.push_back(kbsm::MoveKind::O2);
        } else if (cur == "omega3") {
            out.push_back(kbsm::MoveKind::O3);
        } else if (cur == "omega4") {
            out.push_back(kbsm::MoveKind::O4);
        } else if (cur == "omega5") {
            out.push_back(kbsm::MoveKind::O5);
        } else {
            throw CLI::ValidationError("--moves", "unknown move '" + cur + "'");
        }
        cur.clear();
    };
    for (char ch : list) {
        if (ch == ',')
            flush();
        else
            cur.push_back(ch);
    }
    flush();
    if (out.empty()) throw CLI::ValidationError("--moves", "empty move list");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact KBSM calculator for links in (disk | annulus | pants) x S^1"};
    app.require_subcommand(1);

    // bracket
    std::string bracket_file, bracket_surface;
    bool bracket_trace = false;
    auto* cmd_bracket = app.add_subcommand("bracket", "normal form of a diagram's bracket");
    cmd_bracket->add_option("file", bracket_file, "diagram file")->required();
    cmd_bracket->add_option("--surface", bracket_surface,
                            "override the surface declared in the file");
    cmd_bracket->add_flag("--trace", bracket_trace, "stream rewrite steps to stderr");

    // reduce
    std::string reduce_word, reduce_surface;
    bool reduce_trace = false;
    auto* cmd_reduce = app.add_subcommand("reduce", "normal form of a word");
    cmd_reduce->add_option("word", reduce_word, "word in the documented grammar")->required();
    cmd_reduce->add_option("--surface", reduce_surface, "disk | annulus | pants")->required();
    cmd_reduce->add_flag("--trace", reduce_trace, "stream rewrite steps to stderr");

    // pn / pnk
    int pn_n = 0, pnk_n = 0;
    unsigned pnk_k = 0;
    auto* cmd_pn = app.add_subcommand("pn", "replacement polynomial P_n");
    cmd_pn->add_option("n", pn_n, "arrow count")->required();
    auto* cmd_pnk = app.add_subcommand("pnk", "replacement polynomial P_{n,k}");
    cmd_pnk->add_option("n", pnk_n, "arrow count")->required();
    cmd_pnk->add_option("k", pnk_k, "enclosed x power")->required();

    // verify
    std::string verify_surface = "pants", verify_moves = "all";
    int verify_trials = 0;
    uint64_t verify_seed = 1;
    unsigned verify_maxc = 4, verify_maxd = 4;
    auto* cmd_verify = app.add_subcommand("verify", "Reidemeister-move invariance harness");
    cmd_verify->add_option("--surface", verify_surface, "disk | annulus | pants");
    cmd_verify->add_option("--moves", verify_moves, "comma list: omega1..omega5 or all");
    cmd_verify->add_option("--trials", verify_trials, "trials per move")
        ->required()
        ->check(CLI::Range(1, 100000000));
    cmd_verify->add_option("--seed", verify_seed, "base seed");
    cmd_verify->add_option("--max-crossings", verify_maxc, "base diagram crossing bound");
    cmd_verify->add_option("--max-dots", verify_maxd, "base diagram dot bound");

    // random
    std::string random_surface = "pants";
    unsigned random_maxc = 2, random_maxd = 2;
    uint64_t random_seed = 1;
    auto* cmd_random = app.add_subcommand("random", "emit a random valid diagram");
    cmd_random->add_option("--surface", random_surface, "disk | annulus | pants");
    cmd_random->add_option("--max-crossings", random_maxc, "crossing bound");
    cmd_random->add_option("--max-dots", random_maxd, "dot bound");
    cmd_random->add_option("--seed", random_seed, "seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*cmd_bracket) {
            std::ifstream in(bracket_file);
            if (!in.good()) {
                std::cerr << "cannot open '" << bracket_file << "'\n";
                return 1;
            }
            kbsm::ArrowDiagram d = kbsm::ArrowDiagram::read(in);
            if (!bracket_surface.empty()) d.surface = parse_surface(bracket_surface);
            kbsm::ValidatedDiagram vd = kbsm::ValidatedDiagram::validate(std::move(d));
            if (bracket_trace) {
                kbsm::SmoothContext ctx(vd);
                for (uint64_t st = 0; st < (uint64_t(1) << ctx.num_crossings()); ++st) {
                    auto [forest, sum] = ctx.smooth(st);
                    std::cerr << "STATE " << st << " positive=" << sum.positive
                              << " negative=" << sum.negative << " trivial=" << sum.trivial
                              << " forest=" << kbsm::forest_key(forest) << "\n";
                }
            }
            kbsm::Reducer reducer(vd.surface(), trace_options(bracket_trace));
            std::cout << kbsm::kbsm_bracket(vd, reducer).str() << "\n";
            return 0;
        }
        if (*cmd_reduce) {
            kbsm::Surface s = parse_surface(reduce_surface);
            kbsm::Word w = kbsm::Word::parse(reduce_word, s);
            kbsm::Reducer reducer(s, trace_options(reduce_trace));
            std::cout << reducer.nf(w).str() << "\n";
            return 0;
        }
        if (*cmd_pn) {
            std::cout << kbsm::p_n(pn_n).str() << "\n";
            return 0;
        }
        if (*cmd_pnk) {
            std::cout << kbsm::p_nk(pnk_n, pnk_k).str() << "\n";
            return 0;
        }
        if (*cmd_verify) {
            kbsm::Surface s = parse_surface(verify_surface);
            auto moves = parse_moves(verify_moves);
            kbsm::InvarianceReport rep = kbsm::check_invariance(
                s, moves, verify_trials, verify_seed, verify_maxc, verify_maxd);
            std::cout << rep.str();
            return rep.failures == 0 ? 0 : 2;
        }
        if (*cmd_random) {
            kbsm::Surface s = parse_surface(random_surface);
            kbsm::ValidatedDiagram vd =
                kbsm::random_diagram(s, random_maxc, random_maxd, random_seed);
            std::cout << vd.raw().str();
            return 0;
        }
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const kbsm::WordError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const kbsm::DiagramError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const kbsm::MoveError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    return 1;
}
