#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pklb/pklb.hpp"

using namespace pklb;

namespace {

std::unique_ptr<RandomSource> make_rng(const std::string& seed_hex) {
    if (seed_hex.empty()) return std::make_unique<OsRandom>();
    Bytes seed = from_hex(seed_hex);
    return std::make_unique<SeededRandom>(seed);
}

// Preset resolution: an explicit --preset (or PKLB_PRESET) wins; commands
// that read an object file may instead infer the preset from its header,
// in which case an explicit name must agree.
const ParamSet& preset_from_header(const Bytes& file, const std::string& explicit_name) {
    StoredObject obj = unwrap_object(file);
    const ParamSet& ps = preset_by_id(obj.preset_id);
    if (!explicit_name.empty())
        require(ps.name == explicit_name, Err::ModeMismatch,
                "file is for preset '" + ps.name + "', not '" + explicit_name + "'");
    return ps;
}

void say_wrote(const std::string& path, size_t n) {
    std::cout << "wrote " << path << " (" << n << " bytes)\n";
}

void cmd_keygen(const std::string& preset_name, const std::string& seed_hex,
                const std::string& out_pk, const std::string& out_sk) {
    const ParamSet& ps = preset(preset_name);
    auto rng = make_rng(seed_hex);
    PkePublicKey pk;
    KemSecretKey ksk;
    kem_keygen(ps, *rng, pk, ksk);
    Bytes pkf = wrap_object(ps, ObjKind::PublicKey, serialize_pk(ps, pk));
    Bytes skf = wrap_object(ps, ObjKind::KemSecretKey, serialize_kem_sk(ps, ksk));
    write_file(out_pk, pkf);
    write_file(out_sk, skf);
    say_wrote(out_pk, pkf.size());
    say_wrote(out_sk, skf.size());
}

void cmd_encaps(const std::string& preset_name, const std::string& seed_hex,
                const std::string& pk_file, const std::string& out_ct,
                const std::string& out_key) {
    Bytes pkf = read_file(pk_file);
    const ParamSet& ps = preset_from_header(pkf, preset_name);
    PkePublicKey pk = parse_pk(ps, expect_object(pkf, ps, ObjKind::PublicKey));
    auto rng = make_rng(seed_hex);
    KemEncapsResult res = kem_encaps(ps, pk, *rng);
    Bytes ctf = wrap_object(ps, ObjKind::Ciphertext, serialize_ct(ps, res.ct));
    write_file(out_ct, ctf);
    write_file(out_key, res.key);  // shared secrets are raw bytes, no header
    say_wrote(out_ct, ctf.size());
    say_wrote(out_key, res.key.size());
}

void cmd_decaps(const std::string& preset_name, const std::string& sk_file,
                const std::string& ct_file, const std::string& out_key) {
    Bytes skf = read_file(sk_file);
    const ParamSet& ps = preset_from_header(skf, preset_name);
    KemSecretKey ksk = parse_kem_sk(ps, expect_object(skf, ps, ObjKind::KemSecretKey));
    PkeCiphertext ct = parse_ct(ps, expect_object(read_file(ct_file), ps, ObjKind::Ciphertext));
    Bytes key = kem_decaps(ps, ksk, ct);
    write_file(out_key, key);
    say_wrote(out_key, key.size());
}

void cmd_mkem_keygen(const std::string& preset_name, const std::string& seed_hex,
                     const std::string& group_seed_hex, const std::string& out_pk,
                     const std::string& out_sk) {
    const ParamSet& ps = preset(preset_name);
    Bytes psi = from_hex(group_seed_hex);
    require(psi.size() == 32, Err::BadArgument, "--group-seed must be 32 bytes of hex");
    auto rng = make_rng(seed_hex);
    PkePublicKey pk;
    MkemSecretKey msk;
    mkem_keygen(ps, psi, *rng, pk, msk);
    Bytes pkf = wrap_object(ps, ObjKind::PublicKey, serialize_pk(ps, pk));
    Bytes skf = wrap_object(ps, ObjKind::KemSecretKey, serialize_mkem_sk(ps, msk));
    write_file(out_pk, pkf);
    write_file(out_sk, skf);
    say_wrote(out_pk, pkf.size());
    say_wrote(out_sk, skf.size());
}

void cmd_mkem_encaps(const std::string& preset_name, const std::string& seed_hex,
                     const std::vector<std::string>& pk_files, const std::string& out_ct,
                     const std::string& out_key) {
    require(!pk_files.empty(), Err::BadArgument, "need at least one --pk");
    Bytes first = read_file(pk_files.front());
    const ParamSet& ps = preset_from_header(first, preset_name);
    std::vector<PkePublicKey> pks;
    pks.push_back(parse_pk(ps, expect_object(first, ps, ObjKind::PublicKey)));
    for (size_t i = 1; i < pk_files.size(); ++i)
        pks.push_back(
            parse_pk(ps, expect_object(read_file(pk_files[i]), ps, ObjKind::PublicKey)));
    auto rng = make_rng(seed_hex);
    MkemEncapsResult res = mkem_encaps(ps, pks, *rng);
    Bytes ctf = wrap_object(ps, ObjKind::MultiCiphertext, serialize_mct(ps, res.ct),
                            static_cast<uint32_t>(pks.size()));
    write_file(out_ct, ctf);
    write_file(out_key, res.key);
    say_wrote(out_ct, ctf.size());
    say_wrote(out_key, res.key.size());
}

void cmd_mkem_decaps(const std::string& preset_name, const std::string& sk_file,
                     const std::string& ct_file, size_t index, const std::string& out_key) {
    Bytes skf = read_file(sk_file);
    const ParamSet& ps = preset_from_header(skf, preset_name);
    MkemSecretKey msk = parse_mkem_sk(ps, expect_object(skf, ps, ObjKind::KemSecretKey));
    uint32_t recipients = 0;
    Bytes mct_payload =
        expect_object(read_file(ct_file), ps, ObjKind::MultiCiphertext, &recipients);
    MultiCiphertext mc = parse_mct(ps, mct_payload, recipients);
    Bytes key = mkem_decaps(ps, msk, mpke_ext(mc, index));
    write_file(out_key, key);
    say_wrote(out_key, key.size());
}

void cmd_analyze(const std::string& preset_name, const std::string& table, bool csv) {
    if (!table.empty()) {
        std::cout << report_tables(table);
        return;
    }
    require(!preset_name.empty(), Err::BadArgument,
            "analyze-dfr needs --preset or --table (or PKLB_PRESET)");
    DfrReport r = analyze(preset(preset_name));
    if (csv) {
        std::cout << dfr_csv_header() << '\n' << dfr_csv_row(r) << '\n';
    } else {
        std::printf("preset      %s\n", r.preset.c_str());
        std::printf("lattice     %s   ell %d   t %d   du %d   dv %d   quantizer %s\n",
                    r.lattice.c_str(), r.ell, r.t, r.du, r.dv, quant_kind_name(r.quant));
        std::printf("bound       %s\n", r.bound.c_str());
        std::printf("log2 DFR    %.2f\n", r.log2_dfr);
        if (r.bound == "chernoff") std::printf("theta       %.6g\n", r.theta);
        std::printf("CER         %.3f\n", r.cer);
        if (!r.caveat.empty()) std::printf("# %s\n", r.caveat.c_str());
    }
}

void print_size_row(const ParamSet& ps, int recipients, bool csv) {
    SizeReport s = sizes(ps);
    if (csv) {
        std::printf("%s,%d,%d,%d,%d,%d,%.3f", ps.name.c_str(), s.pk_bytes, s.sk_bytes,
                    s.ct_bytes, s.ct_bits, s.plaintext_bits, s.cer);
        if (recipients > 0)
            std::printf(",%d,%.3f", mpke_ct_bytes(ps, recipients),
                        compact_ratio(ps, recipients));
        std::printf("\n");
    } else {
        std::printf("%-28s %8d %8d %8d %10d %6.3f", ps.name.c_str(), s.pk_bytes, s.sk_bytes,
                    s.ct_bytes, s.plaintext_bits, s.cer);
        if (recipients > 0)
            std::printf(" %10d %8.3f", mpke_ct_bytes(ps, recipients),
                        compact_ratio(ps, recipients));
        std::printf("\n");
    }
}

void cmd_report_sizes(const std::string& preset_name, int recipients, bool csv) {
    if (csv) {
        std::printf("preset,pk_bytes,sk_bytes,ct_bytes,ct_bits,plaintext_bits,cer");
        if (recipients > 0) std::printf(",mpke_ct_bytes_L%d,compact_ratio_L%d", recipients,
                                        recipients);
        std::printf("\n");
    } else {
        std::printf("%-28s %8s %8s %8s %10s %6s", "preset", "pk", "sk", "ct", "ptxt bits",
                    "CER");
        if (recipients > 0) std::printf(" %10s %8s", "mct bytes", "ratio");
        std::printf("\n");
    }
    if (!preset_name.empty()) {
        print_size_row(preset(preset_name), recipients, csv);
    } else {
        for (const ParamSet& ps : preset_registry()) print_size_row(ps, recipients, csv);
    }
}

void cmd_bench(const std::string& preset_name, int iters) {
    require(iters > 0, Err::BadArgument, "--iters must be positive");
    require(!preset_name.empty(), Err::BadArgument, "bench needs --preset (or PKLB_PRESET)");
    const ParamSet& ps = preset(preset_name);
    OsRandom rng;

    auto median_ms = [](std::vector<double>& v) {
        std::sort(v.begin(), v.end());
        size_t n = v.size();
        return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    };
    using clock = std::chrono::steady_clock;
    auto ms_since = [](clock::time_point t0) {
        return std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    };

    std::vector<double> t_kg, t_enc, t_dec;
    PkePublicKey pk;
    KemSecretKey ksk;
    for (int i = 0; i < iters; ++i) {
        auto t0 = clock::now();
        kem_keygen(ps, rng, pk, ksk);
        t_kg.push_back(ms_since(t0));

        t0 = clock::now();
        KemEncapsResult enc = kem_encaps(ps, pk, rng);
        t_enc.push_back(ms_since(t0));

        t0 = clock::now();
        Bytes key = kem_decaps(ps, ksk, enc.ct);
        t_dec.push_back(ms_since(t0));
        require(key == enc.key, Err::MalformedCiphertext, "bench round trip disagreed");
    }
    std::printf("%s, %d iterations, median wall time\n", ps.name.c_str(), iters);
    std::printf("  keygen  %8.3f ms\n", median_ms(t_kg));
    std::printf("  encaps  %8.3f ms\n", median_ms(t_enc));
    std::printf("  decaps  %8.3f ms\n", median_ms(t_dec));
}

void cmd_list_presets() {
    std::printf("%-28s %3s %2s %4s %4s %4s %4s %-8s %-8s\n", "name", "id", "k", "ell", "t",
                "du", "dv", "lattice", "quantizer");
    for (const ParamSet& ps : preset_registry())
        std::printf("%-28s %3d %2d %4d %4d %4d %4d %-8s %-8s\n", ps.name.c_str(), ps.id, ps.k,
                    ps.ell, ps.t, ps.du, ps.dv, lattice_name(ps.lattice),
                    quant_kind_name(ps.quant));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"packed lattice-coded Kyber toolkit"};
    app.require_subcommand(1);

    std::string preset_name, seed_hex;
    app.add_option("--preset", preset_name, "parameter preset name")->envname("PKLB_PRESET");
    app.add_option("--seed", seed_hex, "hex seed for deterministic randomness (test mode)");

    std::string pk_file, sk_file, ct_file, key_file;
    std::vector<std::string> pk_files;
    std::string group_seed_hex, table;
    bool csv = false;
    int recipients = 0, iters = 10;
    size_t index = 0;

    auto* kg = app.add_subcommand("keygen", "generate a key pair");
    kg->add_option("--pk", pk_file, "output public key file")->required();
    kg->add_option("--sk", sk_file, "output secret key file")->required();

    auto* enc = app.add_subcommand("encaps", "encapsulate a shared secret");
    enc->add_option("--pk", pk_file, "public key file")->required();
    enc->add_option("--ct", ct_file, "output ciphertext file")->required();
    enc->add_option("--key", key_file, "output shared secret file (raw bytes)")->required();

    auto* dec = app.add_subcommand("decaps", "decapsulate a shared secret");
    dec->add_option("--sk", sk_file, "secret key file")->required();
    dec->add_option("--ct", ct_file, "ciphertext file")->required();
    dec->add_option("--key", key_file, "output shared secret file (raw bytes)")->required();

    auto* mkg = app.add_subcommand("mkem-keygen", "generate a key pair inside a group");
    mkg->add_option("--group-seed", group_seed_hex, "shared 32-byte matrix seed (hex)")
        ->required();
    mkg->add_option("--pk", pk_file, "output public key file")->required();
    mkg->add_option("--sk", sk_file, "output secret key file")->required();

    auto* menc = app.add_subcommand("mkem-encaps", "encapsulate to many recipients");
    menc->add_option("--pk", pk_files, "recipient public key files (repeat)")->required();
    menc->add_option("--ct", ct_file, "output multi-recipient ciphertext file")->required();
    menc->add_option("--key", key_file, "output shared secret file (raw bytes)")->required();

    auto* mdec = app.add_subcommand("mkem-decaps", "decapsulate one recipient's share");
    mdec->add_option("--sk", sk_file, "secret key file")->required();
    mdec->add_option("--ct", ct_file, "multi-recipient ciphertext file")->required();
    mdec->add_option("--index", index, "recipient position in the ciphertext");
    mdec->add_option("--key", key_file, "output shared secret file (raw bytes)")->required();

    auto* ana = app.add_subcommand("analyze-dfr", "numerical decryption-failure analysis");
    ana->add_flag("--csv", csv, "emit CSV instead of text");
    ana->add_option("--table", table,
                    "emit a whole preset group as CSV (t1, t2, t5, t6 or t9)");

    auto* rs = app.add_subcommand("report-sizes", "key/ciphertext sizes and expansion rates");
    rs->add_flag("--csv", csv, "emit CSV instead of text");
    rs->add_option("--recipients", recipients, "also report multi-recipient sizes for L");

    auto* bn = app.add_subcommand("bench", "median wall times for keygen/encaps/decaps");
    bn->add_option("--iters", iters, "iterations (default 10)");

    auto* lp = app.add_subcommand("list-presets", "enumerate the parameter registry");

    CLI11_PARSE(app, argc, argv);

    try {
        if (kg->parsed()) {
            require(!preset_name.empty(), Err::BadArgument,
                    "keygen needs --preset (or PKLB_PRESET)");
            cmd_keygen(preset_name, seed_hex, pk_file, sk_file);
        } else if (enc->parsed()) {
            cmd_encaps(preset_name, seed_hex, pk_file, ct_file, key_file);
        } else if (dec->parsed()) {
            cmd_decaps(preset_name, sk_file, ct_file, key_file);
        } else if (mkg->parsed()) {
            require(!preset_name.empty(), Err::BadArgument,
                    "mkem-keygen needs --preset (or PKLB_PRESET)");
            cmd_mkem_keygen(preset_name, seed_hex, group_seed_hex, pk_file, sk_file);
        } else if (menc->parsed()) {
            cmd_mkem_encaps(preset_name, seed_hex, pk_files, ct_file, key_file);
        } else if (mdec->parsed()) {
            cmd_mkem_decaps(preset_name, sk_file, ct_file, index, key_file);
        } else if (ana->parsed()) {
            cmd_analyze(preset_name, table, csv);
        } else if (rs->parsed()) {
            cmd_report_sizes(preset_name, recipients, csv);
        } else if (bn->parsed()) {
            cmd_bench(preset_name, iters);
        } else if (lp->parsed()) {
            cmd_list_presets();
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
