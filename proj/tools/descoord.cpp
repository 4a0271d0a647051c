// Command-line front end for the coordination-control library: transform
// generator files, run property checks with witnesses, synthesize
// supervisors, and drive the two-module coordination pipeline.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "des/des.hpp"

namespace {

// Exit codes: 0 = success / property holds, 1 = property fails (witness
// printed) or synthesis without a result, 2 = usage, parse or input errors.
constexpr int kFails = 1;
constexpr int kUsage = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw des::ValidationError("cannot read file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Loaded generator plus the name recorded in its file.
struct Loaded {
  std::string name;
  des::Generator gen;
};

// Generators are normalized to their trim part on ingestion (with a note on
// stderr when that drops states). `trim` and `check nonblocking` load the
// file as written instead: one exists to perform the normalization, the
// other to test exactly the raw structure.
Loaded load(const std::string& path, bool raw = false) {
  des::GeneratorDoc doc = des::parse_generator(read_file(path));
  if (raw) return {doc.name, std::move(doc.gen)};
  des::Generator t = des::trim(doc.gen);
  if (t.state_count() != doc.gen.state_count())
    std::cerr << "note: trimmed '" << path << "' from "
              << doc.gen.state_count() << " to " << t.state_count()
              << " states\n";
  return {doc.name, std::move(t)};
}

void write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw des::ValidationError("cannot write file '" + out_path + "'");
  out << text;
}

// Lifts both generators to the union of their alphabets, so files over
// different (consistent) alphabets can be checked against each other.
std::pair<des::Generator, des::Generator> aligned(const des::Generator& a,
                                                  const des::Generator& b) {
  if (a.alphabet() == b.alphabet()) return {a, b};
  des::Alphabet total = des::Alphabet::merged(a.alphabet(), b.alphabet());
  return {des::lift(a, total), des::lift(b, total)};
}

int verdict_result(const des::PropertyVerdict& v) {
  std::cout << des::verdict_text(v) << "\n";
  return v.holds ? 0 : kFails;
}

des::PropertyVerdict nonblocking_verdict(const des::Generator& g) {
  if (des::is_nonblocking(g)) return des::PropertyVerdict::yes();
  des::Witness w;
  auto blocked = des::first_difference(des::generated_view(g),
                                       des::prefix_closure(g),
                                       des::View::marked);
  if (blocked) w.words = {*blocked};
  w.detail = "accessible state cannot reach a marked state";
  return des::PropertyVerdict::no(std::move(w));
}

std::string comma_joined(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ',';
    out += names[i];
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coordination-control toolkit for discrete-event generators"};
  app.require_subcommand(1);
  int rc = 0;

  // --- structural commands -----------------------------------------------
  auto* product = app.add_subcommand(
      "product", "synchronous product of two or more generator files");
  auto product_files = std::make_shared<std::vector<std::string>>();
  product->add_option("files", *product_files, "generator files")
      ->required()
      ->expected(2, -1);
  auto product_out = std::make_shared<std::string>();
  product->add_option("--out", *product_out, "output file (default stdout)");
  product->callback([=] {
    des::Generator acc = load((*product_files)[0]).gen;
    for (std::size_t i = 1; i < product_files->size(); ++i)
      acc = des::sync_product(acc, load((*product_files)[i]).gen);
    write_output(*product_out, des::serialize_generator(acc, "product"));
  });

  auto* project = app.add_subcommand(
      "project", "natural projection onto a set of events");
  auto project_file = std::make_shared<std::string>();
  auto project_onto = std::make_shared<std::vector<std::string>>();
  auto project_out = std::make_shared<std::string>();
  project->add_option("file", *project_file, "generator file")->required();
  project->add_option("--onto", *project_onto, "events to keep")
      ->required()
      ->delimiter(',');
  project->add_option("--out", *project_out, "output file (default stdout)");
  project->callback([=] {
    Loaded in = load(*project_file);
    des::ProjectionSpec p(in.gen.alphabet(), *project_onto);
    write_output(*project_out,
                 des::serialize_generator(des::project(in.gen, p), in.name));
  });

  auto* trim_cmd = app.add_subcommand(
      "trim", "restrict a generator to its accessible and coaccessible part");
  auto trim_file = std::make_shared<std::string>();
  auto trim_out = std::make_shared<std::string>();
  trim_cmd->add_option("file", *trim_file, "generator file")->required();
  trim_cmd->add_option("--out", *trim_out, "output file (default stdout)");
  trim_cmd->callback([=] {
    Loaded in = load(*trim_file, /*raw=*/true);
    write_output(*trim_out,
                 des::serialize_generator(des::trim(in.gen), in.name));
  });

  auto* closure = app.add_subcommand(
      "closure", "prefix closure (every state marked)");
  auto closure_file = std::make_shared<std::string>();
  auto closure_out = std::make_shared<std::string>();
  closure->add_option("file", *closure_file, "generator file")->required();
  closure->add_option("--out", *closure_out, "output file (default stdout)");
  closure->callback([=] {
    Loaded in = load(*closure_file);
    write_output(*closure_out,
                 des::serialize_generator(des::prefix_closure(in.gen),
                                          in.name));
  });

  auto* enumerate = app.add_subcommand(
      "enumerate", "list generated words up to a length bound");
  auto enum_file = std::make_shared<std::string>();
  auto enum_len = std::make_shared<int>(0);
  auto enum_out = std::make_shared<std::string>();
  enumerate->add_option("file", *enum_file, "generator file")->required();
  enumerate->add_option("--max-len", *enum_len, "maximum word length")
      ->required()
      ->check(CLI::NonNegativeNumber);
  enumerate->add_option("--out", *enum_out, "output file (default stdout)");
  enumerate->callback([=] {
    Loaded in = load(*enum_file);
    std::string text;
    for (const auto& [word, marked] : des::enumerate_bounded(in.gen, *enum_len)) {
      text += des::to_string(word);
      if (marked) text += " *";
      text += '\n';
    }
    write_output(*enum_out, text);
  });

  auto* eq = app.add_subcommand(
      "eq", "compare the languages of two generator files");
  auto eq_files = std::make_shared<std::vector<std::string>>();
  eq->add_option("files", *eq_files, "two generator files")
      ->required()
      ->expected(2);
  eq->callback([&rc, eq_files] {
    auto [a, b] = aligned(load((*eq_files)[0]).gen, load((*eq_files)[1]).gen);
    des::LanguagePair same = des::language_equal(a, b);
    if (same.generated && same.marked) {
      std::cout << "equal\n";
      return;
    }
    des::View view = same.marked ? des::View::generated : des::View::marked;
    auto diff = des::first_difference(a, b, view);
    if (!diff) diff = des::first_difference(b, a, view);
    std::cout << (view == des::View::marked ? "marked" : "generated")
              << " languages differ; word: " << des::to_string(*diff) << "\n";
    rc = kFails;
  });

  // --- property checks -----------------------------------------------------
  auto* check = app.add_subcommand("check", "decide a language property");
  check->require_subcommand(1);

  auto add_spec_plant = [](CLI::App* cmd, std::shared_ptr<std::string> spec,
                           std::shared_ptr<std::string> plant) {
    cmd->add_option("--spec", *spec, "specification generator file")
        ->required();
    cmd->add_option("--plant", *plant, "plant generator file")->required();
  };

  {
    auto* c = check->add_subcommand(
        "controllable",
        "closure of the specification is controllable w.r.t. the plant");
    auto spec = std::make_shared<std::string>();
    auto plant = std::make_shared<std::string>();
    add_spec_plant(c, spec, plant);
    c->callback([&rc, spec, plant] {
      auto [k, l] = aligned(load(*spec).gen, load(*plant).gen);
      rc = verdict_result(des::is_controllable(k, l));
    });
  }
  {
    auto* c = check->add_subcommand(
        "observable",
        "specification is observable w.r.t. the plant and the observable "
        "events");
    auto spec = std::make_shared<std::string>();
    auto plant = std::make_shared<std::string>();
    add_spec_plant(c, spec, plant);
    c->callback([&rc, spec, plant] {
      auto [k, l] = aligned(load(*spec).gen, load(*plant).gen);
      rc = verdict_result(des::is_observable(k, l));
    });
  }
  {
    auto* c = check->add_subcommand(
        "normal",
        "closure of the specification is normal w.r.t. the plant and a "
        "projection");
    auto spec = std::make_shared<std::string>();
    auto plant = std::make_shared<std::string>();
    auto onto = std::make_shared<std::vector<std::string>>();
    add_spec_plant(c, spec, plant);
    c->add_option("--onto", *onto,
                  "events kept by the projection (default: the observable "
                  "events)")
        ->delimiter(',');
    c->callback([&rc, spec, plant, onto] {
      auto [k, l] = aligned(load(*spec).gen, load(*plant).gen);
      des::ProjectionSpec p =
          onto->empty() ? des::ProjectionSpec::onto_observable(k.alphabet())
                        : des::ProjectionSpec(k.alphabet(), *onto);
      rc = verdict_result(des::is_normal(k, l, p));
    });
  }
  {
    auto* c = check->add_subcommand(
        "rel-observable",
        "specification is observable relative to an ambient language");
    auto spec = std::make_shared<std::string>();
    auto ambient = std::make_shared<std::string>();
    auto plant = std::make_shared<std::string>();
    c->add_option("--spec", *spec, "specification generator file")->required();
    c->add_option("--ambient", *ambient, "ambient generator file")->required();
    c->add_option("--plant", *plant, "plant generator file")->required();
    c->callback([&rc, spec, ambient, plant] {
      des::Generator k = load(*spec).gen;
      des::Generator amb = load(*ambient).gen;
      des::Generator l = load(*plant).gen;
      des::Alphabet total = des::Alphabet::merged(
          des::Alphabet::merged(k.alphabet(), amb.alphabet()), l.alphabet());
      rc = verdict_result(des::is_relatively_observable(
          des::lift(k, total), des::lift(amb, total), des::lift(l, total)));
    });
  }
  {
    auto* c = check->add_subcommand(
        "lm-closed",
        "specification equals its closure intersected with the plant's "
        "marked language");
    auto spec = std::make_shared<std::string>();
    auto plant = std::make_shared<std::string>();
    add_spec_plant(c, spec, plant);
    c->callback([&rc, spec, plant] {
      auto [k, g] = aligned(load(*spec).gen, load(*plant).gen);
      rc = verdict_result(des::is_lm_closed(k, g));
    });
  }
  {
    auto* c = check->add_subcommand(
        "nonconflicting",
        "closure of the composition equals the composition of the closures");
    auto files = std::make_shared<std::vector<std::string>>();
    c->add_option("files", *files, "two generator files")
        ->required()
        ->expected(2);
    c->callback([&rc, files] {
      rc = verdict_result(des::is_sync_nonconflicting(load((*files)[0]).gen,
                                                      load((*files)[1]).gen));
    });
  }
  auto add_projection_check =
      [&check, &rc](const std::string& name, const std::string& help,
                    des::PropertyVerdict (*fn)(const des::ProjectionSpec&,
                                               const des::Generator&)) {
        auto* c = check->add_subcommand(name, help);
        auto file = std::make_shared<std::string>();
        auto onto = std::make_shared<std::vector<std::string>>();
        c->add_option("file", *file, "generator file")->required();
        c->add_option("--onto", *onto, "events kept by the projection")
            ->required()
            ->delimiter(',');
        c->callback([&rc, file, onto, fn] {
          Loaded in = load(*file);
          des::ProjectionSpec p(in.gen.alphabet(), *onto);
          rc = verdict_result(fn(p, in.gen));
        });
      };
  add_projection_check(
      "observer",
      "projected continuations to marked images are always realizable",
      des::is_observer);
  add_projection_check(
      "occ",
      "no controllable hidden event ever precedes an uncontrollable kept "
      "event",
      des::is_occ);
  add_projection_check(
      "lcc",
      "uncontrollable kept events reachable through hidden events are "
      "reachable through uncontrollable ones",
      des::is_lcc);
  {
    auto* c = check->add_subcommand(
        "nonblocking", "every accessible state reaches a marked state");
    auto file = std::make_shared<std::string>();
    c->add_option("file", *file, "generator file")->required();
    c->callback([&rc, file] {
      rc = verdict_result(nonblocking_verdict(load(*file, /*raw=*/true).gen));
    });
  }

  // --- synthesis ------------------------------------------------------------
  auto add_synthesis = [&app, &rc](const std::string& name,
                                   const std::string& help, bool with_normal) {
    auto* c = app.add_subcommand(name, help);
    auto spec = std::make_shared<std::string>();
    auto plant = std::make_shared<std::string>();
    auto onto = std::make_shared<std::vector<std::string>>();
    auto out = std::make_shared<std::string>();
    c->add_option("--spec", *spec, "specification generator file")->required();
    c->add_option("--plant", *plant, "plant generator file")->required();
    if (with_normal)
      c->add_option("--onto", *onto,
                    "events kept by the normality projection (default: the "
                    "observable events)")
          ->delimiter(',');
    c->add_option("--out", *out, "output file (default stdout)");
    c->callback([&rc, spec, plant, onto, out, name, with_normal] {
      auto [k, l] = aligned(load(*spec).gen, load(*plant).gen);
      des::SynthesisInput in{k, l, std::nullopt};
      if (with_normal)
        in.projection =
            onto->empty() ? des::ProjectionSpec::onto_observable(k.alphabet())
                          : des::ProjectionSpec(k.alphabet(), *onto);
      des::Generator result = with_normal ? des::sup_cn(in) : des::sup_c(in);
      std::string text = des::serialize_generator(result, name);
      text += std::string("# lm-closed w.r.t. plant: ") +
              (des::is_lm_closed(result, l).holds ? "yes" : "no") + "\n";
      write_output(*out, text);
      rc = 0;
    });
  };
  add_synthesis("supc",
                "supremal controllable sublanguage of the specification", false);
  add_synthesis("supcn",
                "supremal controllable sublanguage with a normal closure",
                true);

  // --- coordination -----------------------------------------------------------
  auto* coordinator = app.add_subcommand(
      "coordinator",
      "trim composition of the plant projections onto the coordinator events");
  auto coord_g1 = std::make_shared<std::string>();
  auto coord_g2 = std::make_shared<std::string>();
  auto coord_events = std::make_shared<std::vector<std::string>>();
  auto coord_out = std::make_shared<std::string>();
  coordinator->add_option("--g1", *coord_g1, "first plant file")->required();
  coordinator->add_option("--g2", *coord_g2, "second plant file")->required();
  coordinator
      ->add_option("--sigma-k", *coord_events,
                   "coordinator events (must include all shared events)")
      ->required()
      ->delimiter(',');
  coordinator->add_option("--out", *coord_out, "output file (default stdout)");
  coordinator->callback([=] {
    des::Generator gk = des::build_coordinator(
        load(*coord_g1).gen, load(*coord_g2).gen, *coord_events);
    write_output(*coord_out, des::serialize_generator(gk, "coordinator"));
  });

  auto* cd = app.add_subcommand(
      "cd-check",
      "specification equals the composition of its projections onto the "
      "coordinator-extended alphabets");
  auto cd_g1 = std::make_shared<std::string>();
  auto cd_g2 = std::make_shared<std::string>();
  auto cd_spec = std::make_shared<std::string>();
  auto cd_events = std::make_shared<std::vector<std::string>>();
  cd->add_option("--g1", *cd_g1, "first plant file")->required();
  cd->add_option("--g2", *cd_g2, "second plant file")->required();
  cd->add_option("--spec", *cd_spec, "specification generator file")
      ->required();
  cd->add_option("--sigma-k", *cd_events, "coordinator events")
      ->required()
      ->delimiter(',');
  cd->callback([&rc, cd_g1, cd_g2, cd_spec, cd_events] {
    rc = verdict_result(des::is_conditionally_decomposable(
        load(*cd_spec).gen, load(*cd_g1).gen.alphabet(),
        load(*cd_g2).gen.alphabet(), *cd_events));
  });

  auto* extend = app.add_subcommand(
      "extend-alphabet",
      "grow the coordinator event set until a structural property holds");
  auto ext_for = std::make_shared<std::string>();
  auto ext_g1 = std::make_shared<std::string>();
  auto ext_g2 = std::make_shared<std::string>();
  auto ext_spec = std::make_shared<std::string>();
  auto ext_events = std::make_shared<std::vector<std::string>>();
  auto ext_out = std::make_shared<std::string>();
  extend
      ->add_option("--for", *ext_for,
                   "target property: cd (conditional decomposability of the "
                   "specification) or observer (coordinator projection is an "
                   "observer for both plants)")
      ->required()
      ->check(CLI::IsMember({"cd", "observer"}));
  extend->add_option("--g1", *ext_g1, "first plant file")->required();
  extend->add_option("--g2", *ext_g2, "second plant file")->required();
  extend->add_option("--spec", *ext_spec,
                     "specification generator file (required for --for cd)");
  extend->add_option("--sigma-k", *ext_events, "starting coordinator events")
      ->required()
      ->delimiter(',');
  extend->add_option("--out", *ext_out, "output file (default stdout)");
  extend->callback([=] {
    des::Generator g1 = load(*ext_g1).gen;
    des::Generator g2 = load(*ext_g2).gen;
    std::vector<std::string> result;
    if (*ext_for == "cd") {
      if (ext_spec->empty())
        throw des::ValidationError("--for cd requires --spec");
      result = des::extend_alphabet_for_cd(load(*ext_spec).gen, g1.alphabet(),
                                           g2.alphabet(), *ext_events);
    } else {
      result = des::extend_alphabet_for_observer(g1, g2, *ext_events);
    }
    write_output(*ext_out, comma_joined(result) + "\n");
  });

  auto* synth = app.add_subcommand(
      "synthesize", "run the two-module coordination pipeline");
  auto syn_g1 = std::make_shared<std::string>();
  auto syn_g2 = std::make_shared<std::string>();
  auto syn_spec = std::make_shared<std::string>();
  auto syn_events = std::make_shared<std::vector<std::string>>();
  auto syn_obs = std::make_shared<std::string>("full");
  auto syn_format = std::make_shared<std::string>("text");
  auto syn_out = std::make_shared<std::string>();
  synth->add_option("--g1", *syn_g1, "first plant file")->required();
  synth->add_option("--g2", *syn_g2, "second plant file")->required();
  synth->add_option("--spec", *syn_spec, "specification generator file")
      ->required();
  synth->add_option("--sigma-k", *syn_events, "coordinator events")
      ->required()
      ->delimiter(',');
  synth
      ->add_option("--observation", *syn_obs,
                   "full: supervisors see every event; partial: supervisors "
                   "see only the events flagged observable")
      ->check(CLI::IsMember({"full", "partial"}));
  synth->add_option("--format", *syn_format, "report format")
      ->check(CLI::IsMember({"text", "json"}));
  synth->add_option("--out", *syn_out, "output file (default stdout)");
  synth->callback([&rc, syn_g1, syn_g2, syn_spec, syn_events, syn_obs,
                   syn_format, syn_out] {
    des::CoordinationProblem prob{load(*syn_g1).gen, load(*syn_g2).gen,
                                  load(*syn_spec).gen, *syn_events,
                                  *syn_obs == "partial"
                                      ? des::Observation::partial
                                      : des::Observation::full};
    des::SynthesisReport report = des::synthesize(prob);
    write_output(*syn_out, *syn_format == "json" ? des::report_json(report)
                                                 : des::report_text(report));
    rc = report.result ? 0 : kFails;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  } catch (const des::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return rc;
}
