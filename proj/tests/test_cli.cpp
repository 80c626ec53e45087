// End-to-end tests for the qds-forge binary: exit codes, output formats,
// determinism, and the CSV/golden-file contract.  Every expected string below
// was captured from a reference run at the default master seed and is stable
// because the CLI derives all randomness from --seed.
#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
};

// Runs the binary with `args`, capturing stdout; stderr is discarded so
// usage messages from the failure cases stay out of the test log.
CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(QDS_FORGE_BIN) + " " + args + " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult res;
  char buf[4096];
  size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) res.out.append(buf, got);
  const int status = ::pclose(pipe);
  REQUIRE(status != -1);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

std::filesystem::path temp_file(const std::string& stem) {
  return std::filesystem::temp_directory_path() /
         ("qds_cli_" + stem + "_" + std::to_string(::getpid()));
}

std::string write_temp(const std::string& stem, const std::string& bytes) {
  const auto path = temp_file(stem);
  std::ofstream f(path, std::ios::binary);
  REQUIRE(f.good());
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  f.close();
  return path.string();
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

// key=value lines to a map; transcript lines (no '=') are skipped.
std::map<std::string, std::string> parse_kv(const std::string& text) {
  std::map<std::string, std::string> kv;
  for (const auto& line : split_lines(text)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

double num(const std::map<std::string, std::string>& kv, const std::string& key) {
  REQUIRE(kv.count(key) == 1);
  return std::stod(kv.at(key));
}

bool close_rel(double got, double want, double tol) {
  return std::fabs(got - want) <= tol * std::fabs(want);
}

}  // namespace

TEST_CASE("cli_exit_codes") {
  const std::string msg = write_temp("msg32", std::string(32, '\0'));

  // Parse errors and invalid input: exit 2.
  CHECK(run_cli("hash --nope").exit_code == 2);
  CHECK(run_cli("").exit_code == 2);                     // missing subcommand
  CHECK(run_cli("hash --message /nonexistent_file").exit_code == 2);
  CHECK(run_cli("session --variant original --n 40").exit_code == 2);  // above n cap
  CHECK(run_cli("security --n 128 --delta1 2").exit_code == 2);
  CHECK(run_cli("rate --budget 0").exit_code == 2);      // empty distance list
  CHECK(run_cli("rate --distance-km 150,100 --budget 0").exit_code == 2);  // not ascending
  CHECK(run_cli("hash --message " + msg + " --out /nonexistent_dir/x").exit_code == 2);
  const std::string bad = write_temp("badcfg", "{bad json");
  CHECK(run_cli("security --config " + bad).exit_code == 2);

  // Help: exit 0.
  CHECK(run_cli("--help").exit_code == 0);

  // Infeasible (valid input, no answer): exit 3.
  CHECK(run_cli("security --distance-km 1000").exit_code == 3);
  const std::string rates =
      write_temp("bigrates", R"({"session":{"e1":0.2,"e2":0.2,"e3":0.2,"e4":0.2}})");
  // Likely-set enumeration at these noise rates exceeds the pair budget.
  CHECK(run_cli("session --config " + rates + " --variant original --n 32").exit_code == 3);
}

TEST_CASE("cli_hash_fixture") {
  // An all-zero message annihilates the Toeplitz product, so hash=0000 for
  // every key; poly and key still change with the seed.
  const std::string zeros = write_temp("zeros32", std::string(32, '\0'));
  const auto r1 = run_cli("hash --message " + zeros);
  CHECK(r1.exit_code == 0);
  CHECK(r1.out ==
        "bits=16\n"
        "message_bits=256\n"
        "poly=c14580\n"
        "key=335a\n"
        "hash=0000\n");
  CHECK(run_cli("hash --message " + zeros).out == r1.out);  // rerun, same bytes

  const auto r2 = parse_kv(run_cli("hash --message " + zeros + " --seed 2").out);
  CHECK(r2.at("poly") != "c14580");
  CHECK(r2.at("key") != "335a");
  CHECK(r2.at("hash") == "0000");

  // Nonzero message: frozen digest at the default seed, both hash widths.
  std::string seq(32, '\0');
  for (int i = 0; i < 32; ++i) seq[static_cast<size_t>(i)] = static_cast<char>(i);
  const std::string seqfile = write_temp("seq32", seq);
  const auto r3 = run_cli("hash --message " + seqfile);
  CHECK(r3.exit_code == 0);
  CHECK(r3.out ==
        "bits=16\n"
        "message_bits=256\n"
        "poly=c14580\n"
        "key=335a\n"
        "hash=b13f\n");
  const auto r4 = run_cli("hash --message " + seqfile + " --bits 24");
  CHECK(r4.out ==
        "bits=24\n"
        "message_bits=256\n"
        "poly=ccce1580\n"
        "key=335a18\n"
        "hash=7daeee\n");

  // Config supplies defaults; explicit flags win over config.
  const std::string cfg = write_temp("hashbits", R"({"hash":{"bits":24}})");
  CHECK(parse_kv(run_cli("hash --message " + seqfile + " --config " + cfg).out)
            .at("bits") == "24");
  CHECK(parse_kv(run_cli("hash --message " + seqfile + " --config " + cfg +
                         " --bits 16").out)
            .at("bits") == "16");

  // --out writes the same bytes to the file and nothing to stdout.
  const auto outfile = temp_file("hashout").string();
  const auto r5 = run_cli("hash --message " + seqfile + " --out " + outfile);
  CHECK(r5.exit_code == 0);
  CHECK(r5.out.empty());
  CHECK(read_file(outfile) == r3.out);
}

TEST_CASE("cli_session_transcripts") {
  // Single honest session, original variant: four transfers then the verdict.
  const auto orig = run_cli("session --variant original --n 16 --m 256");
  CHECK(orig.exit_code == 0);
  CHECK(orig.out ==
        "0 alice bob message-signature 288\n"
        "1 bob charlie message-signature 288\n"
        "2 bob charlie key-strings 48\n"
        "3 charlie bob key-strings 48\n"
        "bob=accept charlie=accept comparisons=2\n");
  CHECK(run_cli("session --variant original --n 16 --m 256").out == orig.out);

  // Improved variant adds receipts and the delayed key publication.
  const auto impr = run_cli("session --variant improved --n 16 --m 32");
  CHECK(impr.exit_code == 0);
  CHECK(impr.out ==
        "0 alice bob message-signature 64\n"
        "1 bob charlie message-signature 64\n"
        "2 bob charlie key-strings 48\n"
        "3 bob alice receipt 0\n"
        "4 charlie bob key-strings 48\n"
        "5 charlie alice receipt 0\n"
        "6 alice all publish-keys 48\n"
        "bob=accept charlie=accept comparisons=2\n");
}

TEST_CASE("cli_session_stats") {
  // Guessing adversary with p_e=0.5 on 16-bit keys: per-trial success
  // probability ~2^-48, so twenty trials must all fail.
  const std::string cfg = write_temp("pe5", R"({"session":{"p_e":0.5}})");
  const auto r = run_cli("session --config " + cfg +
                         " --variant improved --adversary guess --n 16 --trials 20");
  CHECK(r.exit_code == 0);
  const auto kv = parse_kv(r.out);
  CHECK(kv.at("variant") == "improved");
  CHECK(kv.at("adversary") == "guess");
  CHECK(kv.at("trials") == "20");
  CHECK(kv.at("bob_accepts") == "20");
  CHECK(kv.at("charlie_accepts") == "0");
  CHECK(kv.at("bob_accept_rate") == "1");
  CHECK(kv.at("attacked_accept_rate") == "0");
  CHECK(num(kv, "log2_pg") == doctest::Approx(-16.0));
}

TEST_CASE("cli_attack_outputs") {
  // Tamper against the improved variant verifies exactly, so a random
  // corruption never lands back on the signature.
  const auto t = run_cli("attack --kind tamper --variant improved --n 16 --trials 500");
  CHECK(t.exit_code == 0);
  const auto tkv = parse_kv(t.out);
  CHECK(tkv.at("kind") == "tamper");
  CHECK(tkv.at("radius_x") == "0");
  CHECK(tkv.at("radius_y") == "0");
  CHECK(tkv.at("successes") == "0");
  CHECK(tkv.at("log2_ph") == "-7");
  CHECK(tkv.at("p_h") == "0.0078125");

  const auto g = run_cli("attack --kind guess --n 8 --trials 2000");
  CHECK(g.exit_code == 0);
  const auto gkv = parse_kv(g.out);
  CHECK(gkv.at("kind") == "guess");
  CHECK(gkv.at("p_e") == "0.25");
  CHECK(gkv.at("successes") == "2");  // frozen at the default seed
  CHECK(close_rel(num(gkv, "expected_rate"), 0.0010033912775533338, 1e-12));
  CHECK(close_rel(num(gkv, "log2_pg"), -6.4902249956730627, 1e-12));
  CHECK(run_cli("attack --kind guess --n 8 --trials 2000").out == g.out);
}

TEST_CASE("cli_security_direct") {
  // delta1=1, eph=0 reference point: p_g=2^-128 and p_h=2^-127 exactly.
  const auto r = run_cli(
      "security --n 128 --delta1 1 --eph 0 --message-bits 1 --log2-nx 0 --log2-ny 0");
  CHECK(r.exit_code == 0);
  const auto kv = parse_kv(r.out);
  CHECK(kv.at("mode") == "direct");
  CHECK(num(kv, "log2_pg") == -128.0);
  CHECK(num(kv, "p_g") == std::exp2(-128.0));
  CHECK(num(kv, "log2_ph") == -127.0);
  CHECK(num(kv, "p_h") == std::exp2(-127.0));
  CHECK(num(kv, "log2_pf") == -127.0);
  CHECK(num(kv, "epsilon") == std::exp2(-127.0));
  CHECK(kv.at("p_re") == "0");
  CHECK(kv.at("p_ro") == "0");

  // delta1=0 leaves the guessing bound at 1, which dominates everything.
  const auto z = parse_kv(
      run_cli("security --n 16 --delta1 0 --eph 0.1 --message-bits 256").out);
  CHECK(z.at("p_g") == "1");
  CHECK(z.at("epsilon") == "1");
  CHECK(z.at("log2_eps") == "0");
}

TEST_CASE("cli_security_pipeline") {
  const auto r = run_cli("security");
  CHECK(r.exit_code == 0);
  const auto kv = parse_kv(r.out);
  CHECK(kv.at("mode") == "pipeline");
  CHECK(kv.at("distance_km") == "100");
  CHECK(kv.at("status") == "ok");
  CHECK(kv.at("N") == "1000000000000");
  CHECK(kv.at("n") == "390003012");
  CHECK(kv.at("m") == "1e+20");
  CHECK(kv.at("feasible") == "true");
  CHECK(kv.at("rate") == "50000000");
  CHECK(close_rel(num(kv, "E"), 0.05962139486307938, 1e-10));
  CHECK(close_rel(num(kv, "Delta1"), 0.60575753723779613, 1e-10));
  CHECK(close_rel(num(kv, "eph"), 0.024131377552115182, 1e-9));
  CHECK(close_rel(num(kv, "log2_eps"), -163200123.25501978, 1e-9));
  CHECK(kv.at("epsilon") == "0");  // underflows; the log2 field carries it
  CHECK(kv.at("p_g") == "0");

  // Beyond the feasible range the model reports why and exits 3.
  const auto far = run_cli("security --distance-km 1000");
  CHECK(far.exit_code == 3);
  CHECK(parse_kv(far.out).at("status") == "zero_delta1");
}

TEST_CASE("cli_rate_csv") {
  const auto r = run_cli("rate --distance-km 100,150 --budget 0");
  CHECK(r.exit_code == 0);
  const auto lines = split_lines(r.out);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "# qds-forge csv v1");
  CHECK(lines[1] ==
        "distance_km,N,mu,mu1,mu2,q,pz,p0,p1,n,E,Delta1,eph,"
        "log2_pg,log2_ph,log2_eps,R,feasible");

  const auto row0 = split_csv(lines[2]);
  REQUIRE(row0.size() == 18);
  CHECK(row0[0] == "100");
  CHECK(row0[1] == "1000000000000");
  CHECK(close_rel(std::stod(row0[2]), 0.45, 1e-15));
  CHECK(row0[9] == "390003012");
  CHECK(row0[16] == "50000000");
  CHECK(row0[17] == "true");

  const auto row1 = split_csv(lines[3]);
  REQUIRE(row1.size() == 18);
  CHECK(row1[0] == "150");
  CHECK(row1[9] == "124819263");
  CHECK(row1[17] == "true");

  // --out emits the identical CSV to the file and keeps stdout empty.
  const auto outfile = temp_file("ratecsv").string();
  const auto rf = run_cli("rate --distance-km 100,150 --budget 0 --out " + outfile);
  CHECK(rf.exit_code == 0);
  CHECK(rf.out.empty());
  CHECK(read_file(outfile) == r.out);
}

TEST_CASE("cli_sweep_deterministic_golden") {
  const auto r1 = run_cli("sweep");
  CHECK(r1.exit_code == 0);
  CHECK(run_cli("sweep").out == r1.out);  // byte-identical rerun

  const auto lines = split_lines(r1.out);
  REQUIRE(lines.size() == 11);  // banner, header, 100..500 km by 50
  double prev_rate = std::numeric_limits<double>::infinity();
  for (size_t i = 2; i < lines.size(); ++i) {
    const auto f = split_csv(lines[i]);
    REQUIRE(f.size() == 18);
    CHECK(std::stod(f[0]) == doctest::Approx(100.0 + 50.0 * (i - 2)));
    CHECK(f[17] == "true");
    const double rate = std::stod(f[16]);
    CHECK(rate > 0.0);
    CHECK(rate <= prev_rate);
    prev_rate = rate;
  }

  // The checked-in golden transcript pins the whole optimizer stack.
  const auto golden = read_file(std::string(QDS_GOLDEN_DIR) + "/sweep_default.csv");
  CHECK(r1.out == golden);
}
