// Copyright 2026 The ipcauth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ipcauth/scenarios.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <random>
#include <sstream>

#include "ipcauth/error.hpp"
#include "ipcauth/notifications.hpp"
#include "ipcauth/registry_client.hpp"
#include "ipcauth/secure_sdk.hpp"

namespace ipcauth {

namespace {

constexpr char kProviderCredential[] = "ipcauth-provider-credential";
constexpr char kPartnerKey[] = "partner-key";
constexpr char kAttackerKey[] = "attacker-key";
constexpr char kSideloadAttacker[] = "com.poc.attacker.sideload";
constexpr std::uint64_t kOverheadBudgetNanos = 1'000'000;

const std::vector<std::string> kCatalog = {
    "table3_vulnerable",   "table3_secure",      "immutable_vs_mutable",
    "sideload_layer2",     "alt_a_key_rotation", "alt_b_sideload",
    "revocation_instant",  "onboarding_no_update", "android15_masking",
    "mechanism_matrix",    "overhead_micro",
};

std::string provider_package(ProviderMode mode) {
  return mode == ProviderMode::VulnerablePi ? pkg::kVulnerableSdk : pkg::kSecureSdk;
}

/// One self-contained device, kernel and registry.
class World {
 public:
  World(PlatformPolicy policy, ProviderMode mode, std::uint64_t seed)
      : device_(policy),
        kernel_(device_),
        intents_(kernel_),
        notifications_(kernel_, clock_),
        registry_(kProviderCredential, clock_.source()),
        registry_client_(std::make_shared<InProcessRegistryClient>(registry_)),
        rng_(seed),
        mode_(mode),
        provider_pkg_(provider_package(mode)) {
    install(provider_pkg_, "provider-key");
  }

  ProcessHandle install(const std::string& name, const std::string& keyLabel,
                        InstallSource source = InstallSource::Store,
                        Manifest manifest = {}) {
    device_.install_app({name, SigningKey::derive(keyLabel), std::move(manifest), source});
    return kernel_.mint_handle(name);
  }

  /// The genuine partner plus a store-installed attacker holding notification
  /// access that pockets every token the partner posts.
  void install_cast() {
    partner_ = install(pkg::kPartner, kPartnerKey);
    attacker_ = install(pkg::kAttacker, kAttackerKey);
    device_.grant_capability(pkg::kAttacker, Capability::NotificationListener);
    notifications_.set_listener(pkg::kAttacker, [this](const StatusBarNotification& sbn) {
      if (sbn.packageName != pkg::kPartner) return;
      for (auto& token : on_notification_posted(device_, pkg::kAttacker, sbn)) {
        harvested_.store(sbn.packageName, token);
      }
    });
  }

  void register_partner(const std::string& name, const std::string& clientId) {
    registry_.register_partner(name, device_.app(name).certHash, clientId);
  }

  ProviderConfig config() const {
    ProviderConfig c;
    c.mode = mode_;
    c.piAllowlist = {pkg::kPartner};
    c.hardcodedHashes = {SigningKey::derive(kPartnerKey).cert_hash()};
    c.providerCredential = kProviderCredential;
    c.registry = registry_client_;
    return c;
  }

  PublishService& start_service(std::optional<ProviderConfig> cfg = std::nullopt) {
    service_ = std::make_unique<PublishService>(kernel_, kernel_.mint_handle(provider_pkg_),
                                                cfg ? *cfg : config());
    return *service_;
  }

  /// Partner posts a tappable notification; returns the token it embedded.
  PendingIntentToken partner_posts(std::uint64_t trial, Mutability mutability,
                                   std::string text) {
    const std::string nonce = std::to_string(rng_() % 1'000'000'007ULL);
    auto token = intents_.create_pending_intent(
        *partner_,
        {std::string(pkg::kPartner) + ".OPEN_MESSAGE",
         {{"trial", std::to_string(trial)}, {"nonce", nonce}},
         pkg::kPartner},
        mutability);
    notifications_.post_notification(*partner_, {"New message", std::move(text), token, {}});
    clock_.advance();
    return token;
  }

  PublishOutcome call(const ProcessHandle& caller, std::optional<PendingIntentToken> cred,
                      std::string clientId, std::string content = "post") {
    return publish(kernel_, caller, provider_pkg_,
                   {std::move(content), std::move(cred), std::move(clientId)});
  }

  std::uint64_t draw() { return rng_(); }

  SimClock& clock() { return clock_; }
  Device& device() { return device_; }
  Kernel& kernel() { return kernel_; }
  NotificationManager& notifications() { return notifications_; }
  PartnerRegistry& registry() { return registry_; }
  InProcessRegistryClient& registry_client() { return *registry_client_; }
  CredentialCache& harvested() { return harvested_; }
  const ProcessHandle& partner() const { return *partner_; }
  const ProcessHandle& attacker() const { return *attacker_; }
  void set_partner(ProcessHandle h) { partner_ = h; }
  ProviderMode mode() const { return mode_; }

 private:
  SimClock clock_;
  Device device_;
  Kernel kernel_;
  PendingIntentManager intents_;
  NotificationManager notifications_;
  PartnerRegistry registry_;
  std::shared_ptr<InProcessRegistryClient> registry_client_;
  CredentialCache harvested_;
  std::mt19937_64 rng_;
  ProviderMode mode_;
  std::string provider_pkg_;
  std::optional<ProcessHandle> partner_;
  std::optional<ProcessHandle> attacker_;
  std::unique_ptr<PublishService> service_;
};

TrialRecord record_of(std::uint64_t trial, std::string actor, std::string mode,
                      const PublishOutcome& o, std::string note = {}) {
  TrialRecord r;
  r.trial = trial;
  r.actor = std::move(actor);
  r.mode = std::move(mode);
  r.accepted = o.accepted;
  if (o.attributedPartner) r.attributedTo = o.attributedPartner->packageName;
  if (o.layerRejected) r.layerRejected = std::string(to_string(*o.layerRejected));
  r.resolvedCaller = o.resolvedCaller;
  r.note = std::move(note);
  return r;
}

std::string ratio(std::uint64_t n, std::uint64_t d) {
  return std::to_string(n) + "/" + std::to_string(d);
}

struct Context {
  const ScenarioSpec& spec;
  PlatformPolicy platform;
  ScenarioReport& report;

  void check(std::string name, bool passed, std::string detail) {
    report.checks.push_back({std::move(name), passed, std::move(detail)});
  }
  void metric(const std::string& name, std::int64_t value) { report.metrics[name] = value; }
  Mutability mutability() const { return spec.mutability.value_or(Mutability::Immutable); }
};

template <class Pred>
bool all_of(const std::vector<TrialRecord>& records, Pred pred) {
  return std::all_of(records.begin(), records.end(), pred);
}

// --- harvest and replay ------------------------------------------------------

struct AttackRun {
  std::uint64_t successes = 0;
  std::uint64_t tokenMismatches = 0;
  std::map<std::string, std::int64_t> layerCounts;
  std::vector<TrialRecord> records;
};

AttackRun harvest_and_replay(World& world, std::uint64_t trials, Mutability mutability,
                             const std::string& modeLabel) {
  AttackRun run;
  for (std::uint64_t t = 1; t <= trials; ++t) {
    const auto posted = world.partner_posts(
        t, mutability, "You have " + std::to_string(world.draw() % 50 + 1) + " unread");
    const auto stolen = world.harvested().get(pkg::kPartner);
    if (!stolen || stolen->token_id() != posted.token_id()) ++run.tokenMismatches;
    const PublishOutcome o = world.call(world.attacker(), stolen, kPartnerClientId,
                                        "attacker-post-" + std::to_string(t));
    if (o.accepted) ++run.successes;
    if (o.layerRejected) ++run.layerCounts[std::string(to_string(*o.layerRejected))];
    std::ostringstream note;
    note << "token=" << posted.token_id() << " creator=" << get_creator_package(posted)
         << " " << to_string(mutability);
    run.records.push_back(record_of(t, pkg::kAttacker, modeLabel, o, note.str()));
  }
  return run;
}

void table3(Context& ctx, ProviderMode mode) {
  World world(ctx.platform, mode, ctx.spec.seed);
  world.install_cast();
  world.register_partner(pkg::kPartner, kPartnerClientId);
  world.start_service();

  const auto trials = ctx.spec.trials;
  AttackRun run = harvest_and_replay(world, trials, ctx.mutability(),
                                     std::string(to_string(mode)));
  ctx.report.successes = run.successes;
  ctx.metric("harvestedTokens", static_cast<std::int64_t>(world.harvested().size()));
  for (const auto& [layer, n] : run.layerCounts) ctx.metric("rejected" + layer, n);
  ctx.check("harvested_token_matches_posted", run.tokenMismatches == 0,
            std::to_string(run.tokenMismatches) + " mismatches");

  if (mode == ProviderMode::VulnerablePi) {
    ctx.check("attack_success_rate", run.successes == trials, ratio(run.successes, trials));
    ctx.check("attribution_is_token_creator",
              all_of(run.records, [](const TrialRecord& r) {
                return !r.accepted || r.attributedTo == std::string(pkg::kPartner);
              }),
              std::string("accepted requests credited to ") + pkg::kPartner);
  } else {
    ctx.check("attack_success_rate", run.successes == 0, ratio(run.successes, trials));
    ctx.check("resolved_caller_is_attacker",
              all_of(run.records, [](const TrialRecord& r) {
                return !r.accepted && r.resolvedCaller == std::string(pkg::kAttacker) &&
                       r.attributedTo != std::string(pkg::kPartner);
              }),
              std::string("every rejection resolved to ") + pkg::kAttacker);
    const PublishOutcome control = world.call(world.partner(), std::nullopt, kPartnerClientId);
    ctx.metric("partnerControlAccepted", control.accepted ? 1 : 0);
    ctx.check("partner_control_accepted", control.accepted,
              "registered partner calling for itself");
  }
  ctx.report.perTrial = std::move(run.records);
}

void immutable_vs_mutable(Context& ctx) {
  std::map<Mutability, std::uint64_t> successes;
  for (Mutability m : {Mutability::Immutable, Mutability::Mutable}) {
    World world(ctx.platform, ProviderMode::VulnerablePi, ctx.spec.seed);
    world.install_cast();
    world.start_service();
    AttackRun run = harvest_and_replay(world, ctx.spec.trials, m,
                                       "VULNERABLE_PI/" + std::string(to_string(m)));
    successes[m] = run.successes;
    for (auto& r : run.records) ctx.report.perTrial.push_back(std::move(r));
  }
  const auto imm = successes[Mutability::Immutable];
  const auto mut = successes[Mutability::Mutable];
  ctx.report.successes = imm;
  ctx.metric("immutableSuccesses", static_cast<std::int64_t>(imm));
  ctx.metric("mutableSuccesses", static_cast<std::int64_t>(mut));
  ctx.check("success_counts_equal", imm == mut,
            std::to_string(imm) + " == " + std::to_string(mut));
  ctx.check("attack_lands_under_both_flags", imm == ctx.spec.trials,
            ratio(imm, ctx.spec.trials));
}

// --- clones and alternatives -------------------------------------------------

/// The genuine partner is registered, then uninstalled; an attacker-signed
/// app reuses its package name from outside the store.
World& with_sideloaded_clone(World& world) {
  world.install(pkg::kPartner, kPartnerKey);
  world.register_partner(pkg::kPartner, kPartnerClientId);
  world.device().uninstall_app(pkg::kPartner);
  world.set_partner(world.install(pkg::kPartner, kAttackerKey, InstallSource::Sideload));
  return world;
}

std::vector<TrialRecord> clone_calls(World& world, std::uint64_t trials,
                                     const std::string& label) {
  std::vector<TrialRecord> out;
  for (std::uint64_t t = 1; t <= trials; ++t) {
    const PublishOutcome o = world.call(world.partner(), std::nullopt, kPartnerClientId,
                                        "clone-post-" + std::to_string(t));
    out.push_back(record_of(t, "clone:" + std::string(pkg::kPartner), label, o,
                            "stolen clientId " + std::string(kPartnerClientId)));
  }
  return out;
}

std::uint64_t accepted_count(const std::vector<TrialRecord>& records) {
  return static_cast<std::uint64_t>(std::count_if(
      records.begin(), records.end(), [](const TrialRecord& r) { return r.accepted; }));
}

void sideload_layer2(Context& ctx) {
  World world(ctx.platform, ProviderMode::Secure3Layer, ctx.spec.seed);
  with_sideloaded_clone(world).start_service();
  auto records = clone_calls(world, ctx.spec.trials, "SECURE_3LAYER");
  ctx.report.successes = accepted_count(records);
  ctx.check("clone_rejected", ctx.report.successes == 0,
            ratio(ctx.report.successes, ctx.spec.trials) + " accepted");
  ctx.check("rejected_at_L2", all_of(records, [](const TrialRecord& r) {
              return r.layerRejected == std::string("L2");
            }),
            "installed certificate differs from the registered one");

  World faulty(ctx.platform, ProviderMode::Secure3Layer, ctx.spec.seed);
  ProviderConfig cfg = faulty.config();
  cfg.layers.certificate = false;
  with_sideloaded_clone(faulty).start_service(cfg);
  const bool passes = faulty.call(faulty.partner(), std::nullopt, kPartnerClientId).accepted;
  ctx.metric("cloneAcceptedWithoutL2", passes ? 1 : 0);
  ctx.check("certificate_layer_necessary", passes, "clone accepted with L2 disabled");
  ctx.report.perTrial = std::move(records);
}

void alt_b_sideload(Context& ctx) {
  World altB(ctx.platform, ProviderMode::AltBNoCert, ctx.spec.seed);
  with_sideloaded_clone(altB).start_service();
  auto altRecords = clone_calls(altB, ctx.spec.trials, "ALT_B_NO_CERT");

  World secure(ctx.platform, ProviderMode::Secure3Layer, ctx.spec.seed);
  with_sideloaded_clone(secure).start_service();
  auto secureRecords = clone_calls(secure, ctx.spec.trials, "SECURE_3LAYER");

  const auto altAccepted = accepted_count(altRecords);
  const auto secureAccepted = accepted_count(secureRecords);
  ctx.report.successes = altAccepted;
  ctx.metric("altBAccepted", static_cast<std::int64_t>(altAccepted));
  ctx.metric("secureAccepted", static_cast<std::int64_t>(secureAccepted));
  ctx.check("alt_b_accepts_clone", altAccepted == ctx.spec.trials,
            ratio(altAccepted, ctx.spec.trials));
  ctx.check("secure_rejects_clone",
            secureAccepted == 0 && all_of(secureRecords, [](const TrialRecord& r) {
              return r.layerRejected == std::string("L2") ||
                     r.layerRejected == std::string("L3");
            }),
            ratio(secureAccepted, ctx.spec.trials) + " accepted");
  ctx.report.perTrial = std::move(altRecords);
  for (auto& r : secureRecords) ctx.report.perTrial.push_back(std::move(r));
}

void alt_a_key_rotation(Context& ctx) {
  std::map<ProviderMode, std::uint64_t> accepted;
  bool before = true;
  std::size_t redeploys = 0;
  std::int64_t rotateCalls = 0;
  for (ProviderMode mode : {ProviderMode::AltAHardcoded, ProviderMode::Secure3Layer}) {
    World world(ctx.platform, mode, ctx.spec.seed);
    world.set_partner(world.install(pkg::kPartner, kPartnerKey));
    world.register_partner(pkg::kPartner, kPartnerClientId);
    PublishService& service = world.start_service();
    before = before && world.call(world.partner(), std::nullopt, kPartnerClientId).accepted;

    // The partner ships a build signed with its new key.
    world.device().uninstall_app(pkg::kPartner);
    world.set_partner(world.install(pkg::kPartner, "partner-key-rotated"));
    world.registry().rotate_certificate(pkg::kPartner, kPartnerClientId,
                                        world.device().app(pkg::kPartner).certHash);
    if (mode == ProviderMode::Secure3Layer) {
      ++rotateCalls;
      redeploys = service.redeploys();
    }

    for (std::uint64_t t = 1; t <= ctx.spec.trials; ++t) {
      const PublishOutcome o = world.call(world.partner(), std::nullopt, kPartnerClientId);
      if (o.accepted) ++accepted[mode];
      ctx.report.perTrial.push_back(record_of(t, pkg::kPartner, std::string(to_string(mode)),
                                              o, "after key rotation"));
    }
  }
  const auto altA = accepted[ProviderMode::AltAHardcoded];
  const auto sec = accepted[ProviderMode::Secure3Layer];
  ctx.report.successes = sec;
  ctx.metric("altAAccepted", static_cast<std::int64_t>(altA));
  ctx.metric("secureAccepted", static_cast<std::int64_t>(sec));
  ctx.metric("registryRotateCalls", rotateCalls);
  ctx.metric("serviceRedeploys", static_cast<std::int64_t>(redeploys));
  ctx.check("accepted_before_rotation", before, "original key accepted by both modes");
  ctx.check("alt_a_locks_out_rotated_partner",
            altA == 0 && all_of(ctx.report.perTrial, [](const TrialRecord& r) {
              return r.mode != "ALT_A_HARDCODED" || r.layerRejected == std::string("L2");
            }),
            ratio(altA, ctx.spec.trials) + " accepted");
  ctx.check("secure_accepts_rotated_partner", sec == ctx.spec.trials,
            ratio(sec, ctx.spec.trials) + " accepted");
  ctx.check("single_rotate_no_redeploy", rotateCalls == 1 && redeploys == 0,
            std::to_string(rotateCalls) + " rotate call, " + std::to_string(redeploys) +
                " redeploys");
}

// --- lifecycle -----------------------------------------------------------------

void revocation_instant(Context& ctx) {
  World world(ctx.platform, ProviderMode::Secure3Layer, ctx.spec.seed);
  world.set_partner(world.install(pkg::kPartner, kPartnerKey));
  PublishService& service = world.start_service();
  std::uint64_t flips = 0;
  std::uint64_t revokedReason = 0;
  for (std::uint64_t t = 1; t <= ctx.spec.trials; ++t) {
    // Each round re-onboards: revoked records stay revoked.
    world.register_partner(pkg::kPartner, kPartnerClientId);
    const PublishOutcome pre = world.call(world.partner(), std::nullopt, kPartnerClientId);
    world.registry().revoke_partner(pkg::kPartner, kPartnerClientId);
    const PublishOutcome post = world.call(world.partner(), std::nullopt, kPartnerClientId);
    const auto audit = world.registry().list_audit();
    const bool revoked = !audit.empty() && audit.back().reason == VerdictReason::Revoked;
    if (pre.accepted) ++ctx.report.successes;
    if (pre.accepted && !post.accepted) ++flips;
    if (revoked) ++revokedReason;
    ctx.report.perTrial.push_back(record_of(t, pkg::kPartner, "SECURE_3LAYER", pre, "before revoke"));
    ctx.report.perTrial.push_back(record_of(t, pkg::kPartner, "SECURE_3LAYER", post,
                                            revoked ? "after revoke: REVOKED" : "after revoke"));
  }
  const auto n = ctx.spec.trials;
  ctx.metric("flips", static_cast<std::int64_t>(flips));
  ctx.metric("serviceRedeploys", static_cast<std::int64_t>(service.redeploys()));
  ctx.metric("registryRecords", static_cast<std::int64_t>(world.registry().partners().size()));
  ctx.check("accept_then_reject_on_next_call", flips == n, ratio(flips, n) + " rounds flipped");
  ctx.check("reject_reason_revoked", revokedReason == n, ratio(revokedReason, n));
  ctx.check("no_redeploy", service.redeploys() == 0, std::to_string(service.redeploys()));
}

void onboarding_no_update(Context& ctx) {
  World world(ctx.platform, ProviderMode::Secure3Layer, ctx.spec.seed);
  PublishService& service = world.start_service();
  std::uint64_t rejectedBefore = 0;
  for (std::uint64_t t = 1; t <= ctx.spec.trials; ++t) {
    const std::string name = "com.poc.partner.onboarded" + std::to_string(t);
    const std::string clientId = "client-onboarded-" + std::to_string(t);
    const ProcessHandle newcomer = world.install(name, "onboarded-key-" + std::to_string(t));
    const PublishOutcome pre = world.call(newcomer, std::nullopt, clientId);
    if (!pre.accepted) ++rejectedBefore;
    world.register_partner(name, clientId);
    const PublishOutcome post = world.call(newcomer, std::nullopt, clientId);
    if (post.accepted) ++ctx.report.successes;
    ctx.report.perTrial.push_back(record_of(t, name, "SECURE_3LAYER", pre, "before register"));
    ctx.report.perTrial.push_back(record_of(t, name, "SECURE_3LAYER", post, "after register"));
  }
  const auto n = ctx.spec.trials;
  ctx.metric("serviceRedeploys", static_cast<std::int64_t>(service.redeploys()));
  ctx.check("unknown_before_registration", rejectedBefore == n, ratio(rejectedBefore, n));
  ctx.check("accepted_after_registration", ctx.report.successes == n,
            ratio(ctx.report.successes, n));
  ctx.check("no_redeploy", service.redeploys() == 0, std::to_string(service.redeploys()));
}

// --- platform ------------------------------------------------------------------

bool lacks_digit_run(std::string_view text) {
  std::size_t run = 0;
  for (char c : text) {
    run = (c >= '0' && c <= '9') ? run + 1 : 0;
    if (run >= 4) return false;
  }
  return true;
}

void android15_masking(Context& ctx) {
  World world(ctx.platform, ProviderMode::VulnerablePi, ctx.spec.seed);
  world.install_cast();
  world.start_service();

  world.install(kSideloadAttacker, "sideload-attacker-key", InstallSource::Sideload);
  bool sideloadRefused = false;
  try {
    world.device().grant_capability(kSideloadAttacker, Capability::NotificationListener);
  } catch (const Error& e) {
    sideloadRefused = e.code() == Errc::RestrictedSettingsBlocked;
  }
  const bool storeGranted =
      world.device().has_capability(pkg::kAttacker, Capability::NotificationListener);

  std::uint64_t idMatches = 0;
  std::uint64_t masked = 0;
  for (std::uint64_t t = 1; t <= ctx.spec.trials; ++t) {
    std::ostringstream otp;
    otp.width(6);
    otp.fill('0');
    otp << world.draw() % 1'000'000;
    const std::string text = "Your verification code is " + otp.str();
    const auto posted = world.partner_posts(t, ctx.mutability(), text);
    const auto& delivered = world.notifications().delivered_to(pkg::kAttacker).back();
    const auto stolen = world.harvested().get(pkg::kPartner);
    const bool idMatch = stolen && stolen->token_id() == posted.token_id();
    const std::string& seen = delivered.notification.text;
    const bool isMasked = seen.find(otp.str()) == std::string::npos &&
                          lacks_digit_run(seen) && utf8_length(seen) == utf8_length(text);
    if (idMatch) ++idMatches;
    if (isMasked) ++masked;
    const PublishOutcome o = world.call(world.attacker(), stolen, kPartnerClientId);
    if (o.accepted) ++ctx.report.successes;
    ctx.report.perTrial.push_back(record_of(t, pkg::kAttacker, "VULNERABLE_PI", o,
                                            "delivered text: " + seen));
  }
  const auto n = ctx.spec.trials;
  ctx.metric("tokenIdMatches", static_cast<std::int64_t>(idMatches));
  ctx.metric("maskedDeliveries", static_cast<std::int64_t>(masked));
  ctx.check("token_id_preserved", idMatches == n, ratio(idMatches, n));
  ctx.check("otp_digits_masked", masked == n, ratio(masked, n));
  ctx.check("sideload_nls_refused", sideloadRefused,
            std::string(kSideloadAttacker) + " denied notification access");
  ctx.check("store_nls_granted", storeGranted,
            std::string(pkg::kAttacker) + " holds notification access");
  ctx.check("attack_still_lands", ctx.report.successes == n, ratio(ctx.report.successes, n));
}

// --- matrix and overhead ---------------------------------------------------------

void mechanism_matrix(Context& ctx) {
  std::optional<PropertyMatrix> first;
  bool consistent = true;
  for (std::uint64_t t = 1; t <= ctx.spec.trials; ++t) {
    const auto outcomes = run_mechanism_scenarios(ctx.spec.seed);
    PropertyMatrix matrix = build_property_matrix(outcomes);
    if (!first) {
      std::uint64_t satisfied = 0;
      for (const auto& o : outcomes) {
        if (o.satisfied) ++satisfied;
        TrialRecord r;
        r.trial = t;
        r.actor = o.scenario;
        r.mode = "SCENARIO";
        r.accepted = o.satisfied;
        r.note = o.evidence;
        ctx.report.perTrial.push_back(std::move(r));
      }
      ctx.report.successes = satisfied;
      ctx.metric("scenarioCells", static_cast<std::int64_t>(outcomes.size()));
      first = std::move(matrix);
    } else {
      consistent = consistent && first->marks_equal(matrix);
    }
  }
  ctx.check("matrix_complete", first && first->complete(), "40 cells");
  ctx.check("consistent_across_trials", consistent,
            std::to_string(ctx.spec.trials) + " runs");
  ctx.report.matrix = std::move(first);
}

void overhead_micro(Context& ctx) {
  World world(ctx.platform, ProviderMode::Secure3Layer, ctx.spec.seed);
  world.set_partner(world.install(pkg::kPartner, kPartnerKey));
  world.register_partner(pkg::kPartner, kPartnerClientId);
  PublishService& service = world.start_service();
  for (std::uint64_t t = 1; t <= ctx.spec.trials; ++t) {
    const PublishOutcome o = world.call(world.partner(), std::nullopt, kPartnerClientId);
    if (o.accepted) ++ctx.report.successes;
    ctx.report.perTrial.push_back(record_of(t, pkg::kPartner, "SECURE_3LAYER", o));
  }
  const auto& times = service.verification_times();
  TimingStats stats;
  stats.calls = times.size();
  stats.budgetNanos = kOverheadBudgetNanos;
  if (!times.empty()) {
    std::uint64_t total = 0;
    stats.minNanos = UINT64_MAX;
    for (auto d : times) {
      const auto ns = static_cast<std::uint64_t>(d.count());
      total += ns;
      stats.minNanos = std::min(stats.minNanos, ns);
      stats.maxNanos = std::max(stats.maxNanos, ns);
    }
    stats.meanNanos = total / times.size();
  }
  ctx.check("all_calls_accepted", ctx.report.successes == ctx.spec.trials,
            ratio(ctx.report.successes, ctx.spec.trials));
  ctx.report.timing = stats;
}

using Runner = std::function<void(Context&)>;

const std::map<std::string, Runner, std::less<>>& runners() {
  static const std::map<std::string, Runner, std::less<>> table = {
      {"table3_vulnerable", [](Context& c) { table3(c, ProviderMode::VulnerablePi); }},
      {"table3_secure", [](Context& c) { table3(c, ProviderMode::Secure3Layer); }},
      {"immutable_vs_mutable", immutable_vs_mutable},
      {"sideload_layer2", sideload_layer2},
      {"alt_a_key_rotation", alt_a_key_rotation},
      {"alt_b_sideload", alt_b_sideload},
      {"revocation_instant", revocation_instant},
      {"onboarding_no_update", onboarding_no_update},
      {"android15_masking", android15_masking},
      {"mechanism_matrix", mechanism_matrix},
      {"overhead_micro", overhead_micro},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& scenario_catalog() { return kCatalog; }

ScenarioSpec default_spec(std::string_view name) {
  if (!runners().contains(name)) {
    throw Error(Errc::UnknownScenario, std::string(name));
  }
  ScenarioSpec spec;
  spec.name = std::string(name);
  if (name == "overhead_micro") spec.trials = 1000;
  if (name == "mechanism_matrix") spec.trials = 1;
  return spec;
}

ScenarioSpec apply_overrides(ScenarioSpec spec, const nlohmann::json& overrides) {
  if (!overrides.is_object()) throw Error(Errc::InvalidSpec, "spec must be a JSON object");
  try {
    for (const auto& [key, value] : overrides.items()) {
      if (key == "name") {
        if (value.get<std::string>() != spec.name) {
          throw Error(Errc::InvalidSpec, "spec names scenario " + value.get<std::string>());
        }
      } else if (key == "trials") {
        if (!value.is_number_integer() || value.get<std::int64_t>() < 1) {
          throw Error(Errc::InvalidSpec, "trials must be an integer >= 1");
        }
        spec.trials = value.get<std::uint64_t>();
      } else if (key == "seed") {
        if (!value.is_number_integer()) throw Error(Errc::InvalidSpec, "seed must be an integer");
        spec.seed = value.get<std::uint64_t>();
      } else if (key == "platform") {
        spec.platform = parse_platform_policy(value.get<std::string>());
      } else if (key == "mutability") {
        const auto m = value.get<std::string>();
        if (m == "FLAG_IMMUTABLE" || m == "immutable") {
          spec.mutability = Mutability::Immutable;
        } else if (m == "FLAG_MUTABLE" || m == "mutable") {
          spec.mutability = Mutability::Mutable;
        } else {
          throw Error(Errc::InvalidSpec, "unknown mutability " + m);
        }
      } else {
        throw Error(Errc::InvalidSpec, "unknown spec key " + key);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidSpec, e.what());
  }
  return spec;
}

ScenarioReport run_scenario(const ScenarioSpec& spec) {
  auto it = runners().find(spec.name);
  if (it == runners().end()) throw Error(Errc::UnknownScenario, spec.name);
  if (spec.trials < 1) throw Error(Errc::InvalidSpec, "trials must be >= 1");

  const PlatformPolicy platform = spec.platform.value_or(
      spec.name == "android15_masking" ? PlatformPolicy::Android15Masking
                                       : PlatformPolicy::Android14);
  ScenarioReport report;
  report.name = spec.name;
  report.trials = spec.trials;
  report.seed = spec.seed;
  report.platform = std::string(to_string(platform));

  Context ctx{spec, platform, report};
  it->second(ctx);

  report.passed = std::all_of(report.checks.begin(), report.checks.end(),
                              [](const CheckResult& c) { return c.passed; }) &&
                  (!report.timing || report.timing->within_budget());
  return report;
}

}  // namespace ipcauth
