// Command-line front end: build games, solve the vector relaxation, lift to
// observables, run the randomized dimension reduction, simulate play, and run
// the rigidity / entropy diagnostics. Every output records the seed and the
// hash of its inputs so runs can be reproduced exactly.

#include <CLI11.hpp>
#include <omp.h>

#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "xorgames/clifford.hpp"
#include "xorgames/game.hpp"
#include "xorgames/io.hpp"
#include "xorgames/rigidity.hpp"
#include "xorgames/rounding.hpp"
#include "xorgames/sdpsolve.hpp"

namespace {

constexpr const char* kToolVersion = "0.1.0";

using namespace xorgames;

struct Common {
    std::optional<std::int64_t> seed;
    std::vector<std::string> inputs;
    std::string command;
    bool serial = false;

    Exec exec() const { return serial ? Exec::serial : Exec::openmp; }

    std::int64_t seed_or_random() {
        if (!seed) seed = static_cast<std::int64_t>(std::random_device{}());
        return *seed;
    }

    json provenance() const {
        json p{{"tool-version", kToolVersion},
               {"command", command},
               {"inputs-hash", file_hash_hex(inputs)}};
        if (seed) p["seed"] = *seed;
        else p["seed"] = nullptr;
        return p;
    }
};

void emit(const std::string& path, json payload, const Common& common) {
    payload["provenance"] = common.provenance();
    save_json(path, payload);
}

XorGame load_game(const std::string& path) { return game_from_json(load_json(path)); }

QuantumStrategy load_strategy(const std::string& path) {
    return strategy_from_json(load_json(path));
}

Eigen::Index infer_n(const QuantumStrategy& strategy, Eigen::Index given) {
    const auto nA = static_cast<Eigen::Index>(strategy.aliceObs.size());
    const Eigen::Index n = given > 0 ? given : nA;
    require(static_cast<Eigen::Index>(strategy.bobObs.size()) == n * (n - 1),
            "strategy is not CHSH(n)-shaped: expected n(n-1) Bob observables");
    return n;
}

RMat pair_matrix(const RigidityReport& report, double RigidityReport::Pair::*field) {
    RMat m = RMat::Zero(report.n, report.n);
    for (const auto& p : report.pairs) {
        m(p.i - 1, p.j - 1) = p.*field;
        m(p.j - 1, p.i - 1) = p.*field;
    }
    return m;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"XOR nonlocal game toolkit: optimal strategies, dimension "
                 "reduction, and rigidity diagnostics"};
    app.require_subcommand(1);

    Common common;
    int threads = 0;
    app.add_option("--threads", threads,
                   "OpenMP thread count (also honors OMP_NUM_THREADS)");
    app.add_flag("--serial", common.serial, "run the serial reference kernels");

    // game
    auto* cGame = app.add_subcommand("game", "write a game file");
    Eigen::Index gameN = 0;
    std::string gameOut;
    cGame->add_option("--chsh-n", gameN, "build the CHSH(n) family member")->required();
    cGame->add_option("-o,--output", gameOut, "output game JSON")->required();

    // solve
    auto* cSolve = app.add_subcommand("solve", "solve the unit-vector relaxation");
    std::string solveIn, solveOut;
    SolveOptions solveOpt;
    std::int64_t solveSeed = 0;
    bool solveSeedSet = false;
    cSolve->add_option("game", solveIn, "game JSON")->required();
    cSolve->add_option("-o,--output", solveOut, "output vector-strategy JSON")->required();
    cSolve->add_option("--rank", solveOpt.rank, "vector dimension (default: rank rule)");
    cSolve->add_option("--max-sweeps", solveOpt.maxSweeps, "sweep cap per restart");
    cSolve->add_option("--tol", solveOpt.tol, "objective improvement stop threshold");
    cSolve->add_option("--restarts", solveOpt.restarts, "random restarts");
    cSolve->add_option("--seed", solveSeed, "seed")->each([&](const std::string&) {
        solveSeedSet = true;
    });

    // lift
    auto* cLift = app.add_subcommand("lift", "lift unit vectors to observables");
    std::string liftIn, liftOut;
    cLift->add_option("vectors", liftIn, "vector-strategy JSON")->required();
    cLift->add_option("-o,--output", liftOut, "output strategy JSON")->required();

    // slofstra
    auto* cSlof = app.add_subcommand("slofstra", "explicit optimal CHSH(n) strategy");
    Eigen::Index slofN = 0;
    double slofDetune = 0.0;
    std::string slofOut;
    cSlof->add_option("--n", slofN, "question count n")->required();
    cSlof->add_option("--detune", slofDetune, "detuning angle t (noisy strategy)");
    cSlof->add_option("-o,--output", slofOut, "output strategy JSON")->required();

    // round
    auto* cRound = app.add_subcommand("round", "randomized dimension reduction sweep");
    std::string roundIn, roundGame, roundOut, roundBest;
    Eigen::Index roundD = 0;
    std::uint64_t roundTrials = 1;
    std::int64_t roundSeed = 0;
    bool roundSeedSet = false;
    cRound->add_option("strategy", roundIn, "strategy JSON")->required();
    cRound->add_option("--game", roundGame, "game JSON (default: inferred CHSH(n))");
    cRound->add_option("--d", roundD, "target complex dimension")->required();
    cRound->add_option("--trials", roundTrials, "number of seeds to try");
    cRound->add_option("--seed", roundSeed, "seed")->each([&](const std::string&) {
        roundSeedSet = true;
    });
    cRound->add_option("-o,--output", roundOut, "per-trial CSV output")->required();
    cRound->add_option("--best-out", roundBest, "write the best reduced vectors as JSON");

    // simulate
    auto* cSim = app.add_subcommand("simulate", "Monte Carlo game play");
    std::string simIn, simGame, simOut;
    std::uint64_t simRounds = 100000;
    std::int64_t simSeed = 0;
    bool simSeedSet = false;
    int simPartitions = 64;
    cSim->add_option("strategy", simIn, "strategy JSON")->required();
    cSim->add_option("--game", simGame, "game JSON (default: inferred CHSH(n))");
    cSim->add_option("--rounds", simRounds, "number of rounds");
    cSim->add_option("--partitions", simPartitions, "round partitions");
    cSim->add_option("--seed", simSeed, "seed")->each([&](const std::string&) {
        simSeedSet = true;
    });
    cSim->add_option("-o,--output", simOut, "output JSON (default: stdout)");

    // report
    auto* cReport = app.add_subcommand("report", "embedded-CHSH rigidity report");
    std::string repIn, repOut, repCsv;
    Eigen::Index repN = 0;
    cReport->add_option("strategy", repIn, "strategy JSON")->required();
    cReport->add_option("--n", repN, "question count n (default: from shape)");
    cReport->add_option("-o,--output", repOut, "output JSON (default: stdout)");
    cReport->add_option("--emit-csv", repCsv, "prefix for residual-matrix CSV files");

    // certify
    auto* cCert = app.add_subcommand("certify", "entanglement-entropy certificate");
    std::string certIn, certOut;
    Eigen::Index certN = 0, certR = 0;
    double certDelta = 0.01;
    cCert->add_option("strategy", certIn, "strategy JSON")->required();
    cCert->add_option("--n", certN, "question count n (default: from shape)");
    cCert->add_option("--r", certR, "subset size (default: floor(n/3))");
    cCert->add_option("--delta", certDelta, "Fannes reference delta");
    cCert->add_option("-o,--output", certOut, "output JSON (default: stdout)");

    // entropy
    auto* cEnt = app.add_subcommand("entropy", "entanglement entropy of a state");
    std::string entIn, entOut;
    cEnt->add_option("input", entIn, "state or strategy JSON")->required();
    cEnt->add_option("-o,--output", entOut, "output JSON (default: stdout)");

    CLI11_PARSE(app, argc, argv);
    if (threads > 0) omp_set_num_threads(threads);

    auto print_or_save = [&](const std::string& path, json out) {
        if (path.empty()) {
            out["provenance"] = common.provenance();
            std::cout << out.dump(2) << '\n';
        } else {
            emit(path, std::move(out), common);
        }
    };

    try {
        if (*cGame) {
            common.command = "game";
            emit(gameOut, game_to_json(chsh_n(gameN)), common);
        } else if (*cSolve) {
            common.command = "solve";
            common.inputs = {solveIn};
            if (solveSeedSet) common.seed = solveSeed;
            solveOpt.seed = common.seed_or_random();
            solveOpt.exec = common.exec();
            const XorGame game = load_game(solveIn);
            VectorStrategy v = solve_bias(game, solveOpt);
            if (!v.converged)
                std::cerr << "warning: unconverged after " << solveOpt.maxSweeps
                          << " sweeps; best objective kept\n";
            json out = vector_strategy_to_json(v);
            out["upperBound"] = certify_upper(game);
            out["gap"] = out["upperBound"].get<double>() - v.objective;
            emit(solveOut, std::move(out), common);
        } else if (*cLift) {
            common.command = "lift";
            common.inputs = {liftIn};
            const VectorStrategy v = vector_strategy_from_json(load_json(liftIn));
            emit(liftOut, strategy_to_json(tsirelson_lift(v)), common);
        } else if (*cSlof) {
            common.command = "slofstra";
            const QuantumStrategy s = slofDetune != 0.0
                                          ? detuned_slofstra_strategy(slofN, slofDetune)
                                          : slofstra_strategy(slofN);
            emit(slofOut, strategy_to_json(s), common);
        } else if (*cRound) {
            common.command = "round";
            common.inputs = {roundIn};
            if (!roundGame.empty()) common.inputs.push_back(roundGame);
            if (roundSeedSet) common.seed = roundSeed;
            const QuantumStrategy s = load_strategy(roundIn);
            const XorGame game =
                roundGame.empty() ? chsh_n(infer_n(s, 0)) : load_game(roundGame);
            RoundingSweep sweep = rounding_sweep(s, game, roundD, roundTrials,
                                                 common.seed_or_random(), common.exec());
            save_text(roundOut, rounding_csv(sweep));
            if (!roundBest.empty()) {
                json best = vector_strategy_to_json(sweep.outcomes[sweep.bestTrial].reduced);
                best["meanObjective"] = sweep.meanObjective;
                best["stderrObjective"] = sweep.stderrObjective;
                best["bestTrial"] = sweep.bestTrial;
                emit(roundBest, best, common);
            }
        } else if (*cSim) {
            common.command = "simulate";
            common.inputs = {simIn};
            if (!simGame.empty()) common.inputs.push_back(simGame);
            if (simSeedSet) common.seed = simSeed;
            const QuantumStrategy s = load_strategy(simIn);
            const XorGame game = simGame.empty() ? chsh_n(infer_n(s, 0)) : load_game(simGame);
            SimulationResult r = simulate_rounds(s, game, simRounds, common.seed_or_random(),
                                                 simPartitions, common.exec());
            print_or_save(simOut, simulation_to_json(r));
        } else if (*cReport) {
            common.command = "report";
            common.inputs = {repIn};
            const QuantumStrategy s = load_strategy(repIn);
            const Eigen::Index n = infer_n(s, repN);
            RigidityReport report = embedded_chsh_report(s, n, common.exec());
            print_or_save(repOut, report_to_json(report));
            if (!repCsv.empty()) {
                save_text(repCsv + "_pair_epsilon.csv",
                          matrix_csv(pair_matrix(report, &RigidityReport::Pair::epsilon)));
                save_text(repCsv + "_alice_anticomm.csv",
                          matrix_csv(pair_matrix(report, &RigidityReport::Pair::aliceAnticomm)));
                save_text(repCsv + "_bob_anticomm.csv",
                          matrix_csv(pair_matrix(report, &RigidityReport::Pair::bobAnticomm)));
                save_text(repCsv + "_cross_ai.csv",
                          matrix_csv(pair_matrix(report, &RigidityReport::Pair::crossAi)));
                save_text(repCsv + "_cross_aj.csv",
                          matrix_csv(pair_matrix(report, &RigidityReport::Pair::crossAj)));
            }
        } else if (*cCert) {
            common.command = "certify";
            common.inputs = {certIn};
            const QuantumStrategy s = load_strategy(certIn);
            const Eigen::Index n = infer_n(s, certN);
            EntropyCertificate cert = certify_entropy(s, n, certR, certDelta, common.exec());
            print_or_save(certOut, certificate_to_json(cert));
        } else if (*cEnt) {
            common.command = "entropy";
            common.inputs = {entIn};
            const json j = load_json(entIn);
            BipartiteState state;
            if (j.contains("amplitudes")) state = state_from_json(j);
            else if (j.contains("state")) state = state_from_json(j.at("state"));
            else throw SchemaError("entropy: input is neither a state nor a strategy file");
            print_or_save(entOut, json{{"entropyBits", entanglement_entropy(state)}});
        }
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << '\n';
        return 2;
    } catch (const CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << '\n';
        return 4;
    } catch (const ContractError& e) {
        std::cerr << "contract error: " << e.what() << '\n';
        return 3;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
