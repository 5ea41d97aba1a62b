#include "decbandit/engine.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>

namespace decbandit {

std::string_view to_string(RegretMode mode)
{
    return mode == RegretMode::pseudo ? "pseudo" : "realized";
}

void Scenario::validate() const
{
    if (n_agents == 0) {
        throw std::invalid_argument("n_agents must be positive");
    }
    if (schedule.topology.size() != n_agents) {
        throw std::invalid_argument("topology has " + std::to_string(schedule.topology.size()) +
                                    " agents but n_agents = " + std::to_string(n_agents));
    }
    if (schedule.kind == ScheduleKind::static_matrix && !schedule.topology.is_connected()) {
        throw std::invalid_argument("static topology " + schedule.topology.describe() + " is disconnected");
    }
    if (schedule.kind == ScheduleKind::gossip && n_agents < 2) {
        throw std::invalid_argument("gossip schedule needs at least two agents");
    }
    if (schedule.kind == ScheduleKind::link_failure && !(schedule.fail_prob >= 0.0 && schedule.fail_prob <= 1.0)) {
        throw std::invalid_argument("fail_prob must lie in [0, 1]");
    }
    if (horizon == 0) {
        throw std::invalid_argument("horizon must be positive");
    }
    if (n_runs == 0) {
        throw std::invalid_argument("n_runs must be positive");
    }
    if (record_every == 0) {
        throw std::invalid_argument("record_every must be positive");
    }
    policy.validate();
    if (policy.horizon != horizon) {
        throw std::invalid_argument("policy horizon differs from scenario horizon");
    }
    if (!(priors.beta.alpha > 0.0 && priors.beta.beta > 0.0)) {
        throw std::invalid_argument("Beta prior parameters must be positive");
    }
    if (!(priors.gaussian.precision > 0.0) || !std::isfinite(priors.gaussian.mean)) {
        throw std::invalid_argument("Gaussian prior needs a finite mean and positive precision");
    }
}

std::vector<std::size_t> recorded_rounds(std::size_t horizon, std::size_t record_every)
{
    std::vector<std::size_t> rounds;
    rounds.reserve(horizon / record_every + 1);
    for (std::size_t t = record_every; t <= horizon; t += record_every) rounds.push_back(t);
    if (rounds.empty() || rounds.back() != horizon) rounds.push_back(horizon);
    return rounds;
}

std::uint64_t count_messages(const CommMatrix& w, std::size_t num_arms)
{
    return static_cast<std::uint64_t>(w.link_count()) * num_arms;
}

namespace {

template <class P> P prior_for(const Priors& priors);
template <> BetaPosterior prior_for<BetaPosterior>(const Priors& priors) { return priors.beta; }
template <> GaussianPosterior prior_for<GaussianPosterior>(const Priors& priors) { return priors.gaussian; }

} // namespace

template <class P>
Simulation<P>::Simulation(const Scenario& scenario, std::size_t run)
    : scenario_(scenario),
      n_(scenario.n_agents),
      k_(scenario.instance.num_arms()),
      behavior_(baseline_mode(scenario.policy)),
      schedule_(MatrixSchedule::from_spec(scenario.schedule,
                                          derive_seed(scenario.master_seed, StreamKind::schedule, run))),
      banks_(n_ * k_, prior_for<P>(scenario.priors)),
      scratch_(n_ * k_),
      plays_(n_)
{
    scenario_.validate();
    streams_.reserve(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        streams_.emplace_back(derive_seed(scenario.master_seed, StreamKind::agent, run, i));
    }
    if (scenario.regret == RegretMode::realized) {
        counterfactual_.reserve(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            counterfactual_.emplace_back(derive_seed(scenario.master_seed, StreamKind::counterfactual, run, i));
        }
    }
}

template <class P>
void Simulation<P>::observe()
{
    if (observed_) {
        throw std::logic_error("observe called twice without communicate");
    }
    const std::size_t t = round_ + 1;
    const BanditInstance& instance = scenario_.instance;
    const std::size_t best = instance.best_arm();
    const bool shared = behavior_.mode == MergeBehavior::Mode::shared;

    for (std::size_t i = 0; i < n_; ++i) {
        const std::span<const P> bank(banks_.data() + i * k_, k_);
        std::size_t arm;
        if (selector_) {
            arm = selector_(i, t);
        } else if (scenario_.policy.kind == PolicyKind::dec_bayes_ucb) {
            arm = select_arm_bayes_ucb(bank, t, scenario_.policy);
        } else {
            arm = select_arm_thompson(bank, streams_[i]);
        }
        const double reward = draw_reward(instance, arm, streams_[i]);
        plays_[i] = {arm, reward};

        if (scenario_.regret == RegretMode::pseudo) {
            regret_sum_ += instance.gap(arm);
        } else if (arm != best) {
            regret_sum_ += draw_reward(instance, best, counterfactual_[i]) - reward;
        }
        if (!shared) {
            apply_observation(banks_[i * k_ + arm], reward, behavior_.eta, instance);
        }
    }

    if (shared) {
        for (const Play& play : plays_) apply_observation(banks_[play.arm], play.reward, behavior_.eta, instance);
        for (std::size_t i = 1; i < n_; ++i) std::copy_n(banks_.begin(), k_, banks_.begin() + i * k_);
    }
    observed_ = true;
}

template <class P>
void Simulation<P>::communicate()
{
    if (!observed_) {
        throw std::logic_error("communicate called before observe");
    }
    const std::size_t t = round_ + 1;
    switch (behavior_.mode) {
    case MergeBehavior::Mode::none:
        break;
    case MergeBehavior::Mode::shared:
        messages_ += static_cast<std::uint64_t>(n_) * (n_ - 1);
        break;
    case MergeBehavior::Mode::schedule: {
        if (!schedule_.is_static()) current_.emplace(schedule_.next_matrix(t));
        const CommMatrix& w = last_matrix();
        merge_banks_parallel(w, k_, std::span<const P>(banks_), std::span<P>(scratch_));
        banks_.swap(scratch_);
        messages_ += count_messages(w, k_);
        break;
    }
    }
    ++round_;
    observed_ = false;
}

template <class P>
void Simulation<P>::step()
{
    observe();
    communicate();
}

template <class P>
const CommMatrix& Simulation<P>::last_matrix() const
{
    if (schedule_.is_static()) return schedule_.static_matrix();
    if (!current_) {
        throw std::logic_error("no merge has happened yet");
    }
    return *current_;
}

template class Simulation<BetaPosterior>;
template class Simulation<GaussianPosterior>;

namespace {

template <class P>
RegretTrace run_with(const Scenario& scenario, std::size_t run)
{
    Simulation<P> sim(scenario, run);
    const auto rounds = recorded_rounds(scenario.horizon, scenario.record_every);
    RegretTrace trace;
    trace.seed = derive_seed(scenario.master_seed, StreamKind::agent, run);
    trace.regret.reserve(rounds.size());
    std::size_t next = 0;
    for (std::size_t t = 1; t <= scenario.horizon; ++t) {
        sim.step();
        if (t == rounds[next]) {
            trace.regret.push_back(sim.regret());
            ++next;
        }
    }
    trace.messages = sim.messages();
    return trace;
}

AggregateResult aggregate(const Scenario& scenario, std::vector<RegretTrace> traces)
{
    AggregateResult out;
    out.rounds = recorded_rounds(scenario.horizon, scenario.record_every);
    const std::size_t points = out.rounds.size();
    const auto runs = static_cast<double>(traces.size());
    out.mean.assign(points, 0.0);
    out.std_error.assign(points, 0.0);
    for (std::size_t p = 0; p < points; ++p) {
        double sum = 0.0;
        for (const RegretTrace& tr : traces) sum += tr.regret[p];
        const double mean = sum / runs;
        double ss = 0.0;
        for (const RegretTrace& tr : traces) ss += (tr.regret[p] - mean) * (tr.regret[p] - mean);
        out.mean[p] = mean;
        out.std_error[p] = traces.size() > 1 ? std::sqrt(ss / (runs - 1.0) / runs) : 0.0;
    }
    out.messages.reserve(traces.size());
    for (const RegretTrace& tr : traces) out.messages.push_back(tr.messages);
    if (scenario.keep_runs) out.runs = std::move(traces);
    return out;
}

} // namespace

RegretTrace run_once(const Scenario& scenario, std::size_t run)
{
    if (scenario.instance.family() == RewardFamily::bernoulli) {
        return run_with<BetaPosterior>(scenario, run);
    }
    return run_with<GaussianPosterior>(scenario, run);
}

AggregateResult run_scenario(const Scenario& scenario)
{
    scenario.validate();
    const auto runs = static_cast<std::ptrdiff_t>(scenario.n_runs);
    std::vector<RegretTrace> traces(scenario.n_runs);
    std::vector<std::exception_ptr> errors(scenario.n_runs);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t r = 0; r < runs; ++r) {
        const auto run = static_cast<std::size_t>(r);
        try {
            traces[run] = run_once(scenario, run);
        } catch (...) {
            errors[run] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return aggregate(scenario, std::move(traces));
}

AggregateResult run_scenario_serial(const Scenario& scenario)
{
    scenario.validate();
    std::vector<RegretTrace> traces;
    traces.reserve(scenario.n_runs);
    for (std::size_t run = 0; run < scenario.n_runs; ++run) traces.push_back(run_once(scenario, run));
    return aggregate(scenario, std::move(traces));
}

} // namespace decbandit
