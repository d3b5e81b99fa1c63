use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};
use std::time::{Duration, Instant};

use rosetta_core::rdf::{ontology_graph_iri, parse, RdfFormat};
use rosetta_core::Iri;
use rosetta_service::config::Config;
use rosetta_service::App;

const BASE: &str = "https://example.org/kg";
const WD: &str = "http://www.wikidata.org/entity/";

struct Env {
    dir: tempfile::TempDir,
}

impl Env {
    fn new() -> Self {
        let env = Env { dir: tempfile::tempdir().unwrap() };
        env.ok(&["type", "create", "--bundled"]);
        env
    }

    fn data(&self) -> PathBuf {
        self.dir.path().join("data")
    }

    fn command(&self, args: &[&str]) -> Command {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_rosetta"));
        for var in ["ROSETTA_CONFIG", "ROSETTA_DATA", "ROSETTA_BASE_IRI", "ROSETTA_USER", "ROSETTA_NANOPUB_SERVER", "ROSETTA_ADDR"] {
            cmd.env_remove(var);
        }
        cmd.arg("--data").arg(self.data()).args(["--base-iri", BASE, "--user", "https://example.org/user/cli"]);
        cmd.args(args);
        cmd
    }

    fn run(&self, args: &[&str]) -> Output {
        self.command(args).output().unwrap()
    }

    fn ok(&self, args: &[&str]) -> String {
        let out = self.run(args);
        assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
        String::from_utf8(out.stdout).unwrap()
    }

    fn fails(&self, args: &[&str], code: i32) -> String {
        let out = self.run(args);
        assert_eq!(out.status.code(), Some(code), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(out.stdout.is_empty());
        String::from_utf8(out.stderr).unwrap()
    }

    fn add_orange(&self) -> String {
        let subject = format!("{WD}Q13191|orange");
        let quality = format!("QUALITY={WD}Q25288|Weight");
        let unit = format!("UNIT={WD}Q41803|gram");
        let out = self.ok(&[
            "stmt", "add", "--type", "measurement", "--subject", &subject, "--set", &quality, "--set",
            "MAIN_VALUE=153.6", "--set", &unit,
        ]);
        let mut lines = out.lines();
        let id = lines.next().unwrap().to_string();
        assert_eq!(lines.next(), Some("orange has a Weight of 153.6 gram"));
        id
    }
}

#[test]
fn render_prints_the_sentence() {
    let env = Env::new();
    let id = env.add_orange();
    assert!(id.starts_with("https://example.org/kg/statement/"));
    assert_eq!(env.ok(&["stmt", "render", &id]), "orange has a Weight of 153.6 gram\n");
    let short = id.rsplit('/').next().unwrap();
    assert_eq!(env.ok(&["stmt", "render", short]), "orange has a Weight of 153.6 gram\n");
}

#[test]
fn missing_required_position_exits_with_constraint_violation() {
    let env = Env::new();
    let subject = format!("{WD}Q13191|orange");
    let stderr = env.fails(&["stmt", "add", "--type", "measurement", "--subject", &subject, "--set", "MAIN_VALUE=1"], 5);
    assert!(stderr.contains("ConstraintViolation"), "{stderr}");
    env.fails(&["stmt", "add", "--type", "measurement", "--set", "MAIN_VALUE=1"], 5);
}

#[test]
fn export_matches_the_full_graph() {
    let env = Env::new();
    let id = env.add_orange();
    let file = env.dir.path().join("store.nq");
    env.ok(&["export", "--format", "nquads", "-o", file.to_str().unwrap()]);
    let text = std::fs::read_to_string(&file).unwrap();
    let exported = parse(&text, RdfFormat::NQuads).unwrap();

    let mut config = Config::in_memory(Iri::new(BASE).unwrap());
    config.data_dir = Some(env.data());
    let app = App::open(config).unwrap();
    let full = app.engine().full_graph(&Iri::new(id).unwrap()).unwrap();
    let onto = ontology_graph_iri(&Iri::new(BASE).unwrap());
    let statement_quads: Vec<_> = exported.iter().filter(|q| q.graph.as_ref() != Some(&onto)).cloned().collect();
    assert_eq!(statement_quads.len(), full.len());
    assert!(full.iter().all(|q| exported.contains(q)));
    assert_eq!(text.lines().filter(|l| !l.trim().is_empty()).count(), exported.len());

    let trig = env.ok(&["export"]);
    assert_eq!(parse(&trig, RdfFormat::TriG).unwrap(), exported);
    env.fails(&["export", "--format", "turtle"], 4);
}

#[test]
fn edit_history_and_delete() {
    let env = Env::new();
    let id = env.add_orange();
    let out = env.ok(&["stmt", "update", &id, "--set", "MAIN_VALUE=153.7", "--set", "INTERVAL_VALUE=95"]);
    assert_eq!(out, "version 2\norange has a Weight of 153.7 gram (95 % Conf. Int.:\n");
    env.ok(&["stmt", "update", &id, "--clear", "INTERVAL_VALUE"]);
    assert_eq!(env.ok(&["stmt", "render", &id, "--version", "1"]), "orange has a Weight of 153.6 gram\n");

    let history: serde_json::Value = serde_json::from_str(&env.ok(&["stmt", "history", &id])).unwrap();
    let kinds: Vec<(&str, &str)> = history
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["thematic_label"].as_str().unwrap(), r["kind"].as_str().unwrap()))
        .collect();
    assert_eq!(kinds, [("INTERVAL_VALUE", "added"), ("MAIN_VALUE", "modified"), ("INTERVAL_VALUE", "removed")]);
    assert_eq!(history[0]["editor"], "https://example.org/user/cli");

    let shown: serde_json::Value = serde_json::from_str(&env.ok(&["stmt", "show", &id])).unwrap();
    assert_eq!(shown["version"]["version_number"], 3);

    assert!(env.ok(&["stmt", "delete", &id]).starts_with(&format!("deleted {id} at ")));
    let stderr = env.fails(&["stmt", "render", &id], 7);
    assert!(stderr.contains("Gone") && stderr.contains("https://example.org/user/cli"), "{stderr}");
    env.fails(&["stmt", "show", &id], 7);
    env.fails(&["nanopub", &id], 7);
    env.fails(&["stmt", "delete", &id], 8);
    env.fails(&["stmt", "render", "nope"], 3);
}

#[test]
fn usage_errors_exit_with_2() {
    let env = Env::new();
    env.fails(&["stmt", "frobnicate"], 2);
    env.fails(&["facet"], 2);
    env.fails(&["stmt", "update", "x", "--set", "novalue"], 3);
}

#[test]
fn search_facet_and_crosswalk() {
    let env = Env::new();
    let orange = env.add_orange();
    let subject = format!("{WD}Q89|apple");
    let quality = format!("QUALITY={WD}Q25288|Weight");
    let unit = format!("UNIT={WD}Q41803|gram");
    for value in ["212.45", "241.68"] {
        let main = format!("MAIN_VALUE={value}");
        env.ok(&["stmt", "add", "--type", "measurement", "--subject", &subject, "--set", &quality, "--set", &main, "--set", &unit]);
    }

    let hits: serde_json::Value = serde_json::from_str(&env.ok(&["search", "orange"])).unwrap();
    assert_eq!(hits.as_array().unwrap().len(), 1);
    assert_eq!(hits[0]["hits"][0]["anchor"], orange.as_str());

    let facet: serde_json::Value =
        serde_json::from_str(&env.ok(&["facet", "--type", "measurement", "--filter", "MAIN_VALUE=200..250"])).unwrap();
    assert_eq!(facet["statements"].as_array().unwrap().len(), 2);
    let by_unit = format!("UNIT={WD}Q41803");
    let facet: serde_json::Value =
        serde_json::from_str(&env.ok(&["facet", "--type", "measurement", "--filter", &by_unit])).unwrap();
    assert_eq!(facet["statements"].as_array().unwrap().len(), 3);
    env.fails(&["facet", "--type", "measurement", "--filter", "UNIT=1..2"], 4);

    let spec = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/crosswalks/oboe_measurement.yaml");
    let spec = spec.to_str().unwrap();
    let out = env.ok(&["crosswalk", "apply", "--spec", spec, &orange]);
    let graph = parse(&out, RdfFormat::TriG).unwrap();
    assert!(graph.iter().any(|q| q.object.as_literal().is_some_and(|l| l.lexical == "153.6")));
    assert_eq!(env.ok(&["crosswalk", "apply", "--name", "oboe-measurement", &orange]), out);

    let empty = env.dir.path().join("empty.tsv");
    std::fs::write(&empty, "subject_id\tpredicate_id\tobject_id\n").unwrap();
    let stderr = env.fails(&["crosswalk", "apply", "--spec", spec, "--map", empty.to_str().unwrap(), &orange], 10);
    assert!(stderr.contains("UnmappedEntityError"), "{stderr}");
    env.fails(&["crosswalk", "apply", "--name", "nope", &orange], 3);
}

#[test]
fn config_file_and_environment() {
    let env = Env::new();
    let config = env.dir.path().join("rosetta.toml");
    std::fs::write(
        &config,
        "base_iri = \"https://file.example/kg\"\ndata_dir = \"other\"\n[prefixes]\nwdt = \"http://www.wikidata.org/entity/\"\n",
    )
    .unwrap();
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_rosetta"));
    cmd.env_clear().env("ROSETTA_CONFIG", &config).args(["type", "create", "--bundled"]);
    assert!(cmd.output().unwrap().status.success());
    assert!(env.dir.path().join("other/statements.log").exists());

    let mut cmd = Command::new(env!("CARGO_BIN_EXE_rosetta"));
    cmd.env_clear().env("ROSETTA_CONFIG", &config).env("ROSETTA_USER", "wdt:Q1").args([
        "stmt", "add", "--type", "exists", "--subject", "wdt:Q42|Douglas Adams",
    ]);
    let out = cmd.output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("https://file.example/kg/statement/"), "{stdout}");
    assert!(stdout.contains("Douglas Adams"));

    let mut cmd = Command::new(env!("CARGO_BIN_EXE_rosetta"));
    cmd.env_clear()
        .env("ROSETTA_CONFIG", &config)
        .env("ROSETTA_BASE_IRI", "https://env.example/kg")
        .args(["type", "list"]);
    let listed = String::from_utf8(cmd.output().unwrap().stdout).unwrap();
    assert!(listed.contains("https://file.example/kg/pattern/exists"), "types keep their minted IRIs: {listed}");

    let broken = env.dir.path().join("broken.toml");
    std::fs::write(&broken, "colour = 1\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_rosetta")).env_clear().env("ROSETTA_CONFIG", &broken).args(["type", "list"]).output().unwrap();
    assert_eq!(out.status.code(), Some(4));
}

/// Accepts one HTTP request and answers 201 with a Location header.
fn fake_nanopub_server() -> (String, std::thread::JoinHandle<String>) {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let url = format!("http://{}/np", listener.local_addr().unwrap());
    let handle = std::thread::spawn(move || {
        let (stream, _) = listener.accept().unwrap();
        let mut reader = BufReader::new(stream);
        let mut length = 0;
        loop {
            let mut line = String::new();
            reader.read_line(&mut line).unwrap();
            if let Some(v) = line.to_ascii_lowercase().strip_prefix("content-length:") {
                length = v.trim().parse().unwrap();
            }
            if line == "\r\n" {
                break;
            }
        }
        let mut body = vec![0; length];
        reader.read_exact(&mut body).unwrap();
        let mut stream = reader.into_inner();
        stream
            .write_all(b"HTTP/1.1 201 Created\r\nLocation: https://np.example/RA1\r\nContent-Length: 0\r\nConnection: close\r\n\r\n")
            .unwrap();
        String::from_utf8(body).unwrap()
    });
    (url, handle)
}

#[test]
fn nanopub_print_and_publish() {
    let env = Env::new();
    let id = env.add_orange();
    let trig = env.ok(&["nanopub", &id]);
    let np = rosetta_core::nanopub::parse_nanopub(&trig).unwrap();
    assert_eq!(np.id.as_str(), format!("{id}/v1/np"));
    env.fails(&["nanopub", &id, "--version", "2"], 3);
    env.fails(&["nanopub", &id, "--publish"], 4);

    let (url, server) = fake_nanopub_server();
    let out = env.ok(&["nanopub", &id, "--hash", "--publish", "--nanopub-server", &url]);
    assert_eq!(out, "https://np.example/RA1\n");
    let posted = rosetta_core::nanopub::parse_nanopub(&server.join().unwrap()).unwrap();
    assert!(posted.verify_content_hash());
}

#[test]
fn serve_answers_http() {
    let env = Env::new();
    let id = env.add_orange();
    let short = id.rsplit('/').next().unwrap().to_string();
    let port = TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let addr = format!("127.0.0.1:{port}");
    let mut child = env.command(&["serve", "--addr", &addr]).stdout(Stdio::null()).stderr(Stdio::null()).spawn().unwrap();
    let deadline = Instant::now() + Duration::from_secs(20);
    let body = loop {
        match ureq::get(&format!("http://{addr}/statements/{short}/render")).call() {
            Ok(res) => break res.into_body().read_to_string().unwrap(),
            Err(_) if Instant::now() < deadline => std::thread::sleep(Duration::from_millis(100)),
            Err(e) => {
                child.kill().unwrap();
                panic!("server did not come up: {e}");
            }
        }
    };
    child.kill().unwrap();
    child.wait().unwrap();
    let rendered: serde_json::Value = serde_json::from_str(&body).unwrap();
    assert_eq!(rendered["text"], "orange has a Weight of 153.6 gram");
}
