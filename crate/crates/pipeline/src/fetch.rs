//! Optional remote retrieval of newform groups.
//!
//! A group is fetched with a single HTTP/1.0 GET and cached to a local
//! file in exactly the bundled fixture format, so a fetched dataset and a
//! bundled one are interchangeable.  Nothing is written unless the whole
//! response validates, and the bundled fixtures keep the rest of the crate
//! fully offline.

use std::io::{Read as _, Write as _};
use std::net::TcpStream;
use std::path::Path;
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use crate::dataset::{validate, write_dataset, DatasetFile, GroupRecord, Manifest};
use crate::{PipelineError, Result};

/// Environment variable naming the endpoint base URL.
pub const ENDPOINT_VAR: &str = "RQFERMAT_ENDPOINT";

/// The configured endpoint, if any.
pub fn endpoint_from_env() -> Option<String> {
    std::env::var(ENDPOINT_VAR).ok().filter(|s| !s.is_empty())
}

fn split_url(url: &str) -> Result<(String, String)> {
    let rest = url
        .strip_prefix("http://")
        .ok_or_else(|| PipelineError::Transport(format!("only http:// URLs are supported: {}", url)))?;
    let (host, path) = match rest.find('/') {
        Some(i) => (&rest[..i], &rest[i..]),
        None => (rest, "/"),
    };
    let host = if host.contains(':') {
        host.to_string()
    } else {
        format!("{}:80", host)
    };
    Ok((host, path.trim_end_matches('/').to_string()))
}

fn http_get(host: &str, path: &str) -> Result<String> {
    let mut stream = TcpStream::connect(host)
        .map_err(|e| PipelineError::Transport(format!("connect {}: {}", host, e)))?;
    stream
        .set_read_timeout(Some(Duration::from_secs(30)))
        .map_err(|e| PipelineError::Transport(e.to_string()))?;
    let request = format!(
        "GET {} HTTP/1.0\r\nHost: {}\r\nAccept: application/json\r\nConnection: close\r\n\r\n",
        path, host
    );
    stream
        .write_all(request.as_bytes())
        .map_err(|e| PipelineError::Transport(e.to_string()))?;
    let mut raw = Vec::new();
    stream
        .read_to_end(&mut raw)
        .map_err(|e| PipelineError::Transport(e.to_string()))?;
    let text = String::from_utf8(raw)
        .map_err(|_| PipelineError::Transport("response is not UTF-8".into()))?;
    let (head, body) = text
        .split_once("\r\n\r\n")
        .ok_or_else(|| PipelineError::Transport("malformed HTTP response".into()))?;
    let status = head.lines().next().unwrap_or_default();
    let mut parts = status.split_whitespace();
    let _version = parts.next();
    let code = parts.next().unwrap_or("");
    if code != "200" {
        return Err(PipelineError::Transport(format!(
            "endpoint returned status {}",
            if code.is_empty() { "unknown" } else { code }
        )));
    }
    Ok(body.to_string())
}

/// Fetches the newform group for one (field, level-norm) pair.
pub fn fetch_group(endpoint: &str, d: u64, level_norm: u64) -> Result<GroupRecord> {
    let (host, base) = split_url(endpoint)?;
    let path = format!("{}/newforms/{}/{}", base, d, level_norm);
    let body = http_get(&host, &path)?;
    let group: GroupRecord = serde_json::from_str(&body)?;
    if group.d != d {
        return Err(PipelineError::Schema(format!(
            "endpoint returned a group for d={} when d={} was requested",
            group.d, d
        )));
    }
    if group.level.norm != level_norm {
        return Err(PipelineError::Schema(format!(
            "endpoint returned level norm {} when {} was requested",
            group.level.norm, level_norm
        )));
    }
    Ok(group)
}

/// Fetches several groups and caches them as a validated dataset file.
/// The file appears only if every group validates.
pub fn fetch_and_cache(
    endpoint: &str,
    requests: &[(u64, u64)],
    dest: &Path,
) -> Result<DatasetFile> {
    let mut groups = Vec::new();
    for &(d, level_norm) in requests {
        groups.push(fetch_group(endpoint, d, level_norm)?);
    }
    let retrieved = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|t| format!("unix:{}", t.as_secs()))
        .unwrap_or_else(|_| "unix:0".to_string());
    let file = DatasetFile {
        manifest: Manifest {
            source: endpoint.to_string(),
            retrieved,
            prime_norm_bound: 60,
        },
        groups,
    };
    validate(&file)?;
    write_dataset(dest, &file)?;
    Ok(file)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{ideal_repr, load_dataset, predicted_level_ideals};
    use num_bigint::BigInt;
    use rqfermat::make_field;
    use std::io::{BufRead, BufReader};
    use std::net::TcpListener;

    fn serve_once(response: String) -> String {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = listener.local_addr().unwrap();
        std::thread::spawn(move || {
            let (stream, _) = listener.accept().unwrap();
            let mut reader = BufReader::new(stream);
            let mut line = String::new();
            reader.read_line(&mut line).unwrap();
            loop {
                let mut h = String::new();
                reader.read_line(&mut h).unwrap();
                if h == "\r\n" || h.is_empty() {
                    break;
                }
            }
            let mut stream = reader.into_inner();
            stream.write_all(response.as_bytes()).unwrap();
        });
        format!("http://{}", addr)
    }

    fn sample_group() -> GroupRecord {
        let fld = make_field(7).unwrap();
        let level = predicted_level_ideals(&fld)
            .unwrap()
            .into_iter()
            .find(|l| l.norm() == BigInt::from(2))
            .unwrap();
        GroupRecord {
            d: 7,
            level: ideal_repr(&level).unwrap(),
            provenance: "no_newforms_attested".into(),
            forms: vec![],
        }
    }

    fn ok_response(body: &str) -> String {
        format!(
            "HTTP/1.0 200 OK\r\nContent-Type: application/json\r\n\r\n{}",
            body
        )
    }

    #[test]
    fn fetch_round_trips_through_cache() {
        let body = serde_json::to_string(&sample_group()).unwrap();
        let endpoint = serve_once(ok_response(&body));
        let dir = tempfile::tempdir().unwrap();
        let dest = dir.path().join("cached.json");
        let file = fetch_and_cache(&endpoint, &[(7, 2)], &dest).unwrap();
        assert_eq!(file.groups.len(), 1);
        let reloaded = load_dataset(&dest).unwrap();
        assert_eq!(reloaded.groups.len(), 1);
        assert!(reloaded.manifest.source.starts_with("http://"));
        assert!(reloaded.manifest.retrieved.starts_with("unix:"));
    }

    #[test]
    fn http_error_is_transport_failure() {
        let endpoint = serve_once("HTTP/1.0 404 Not Found\r\n\r\nnope".into());
        let err = fetch_group(&endpoint, 7, 2).unwrap_err();
        assert!(matches!(err, PipelineError::Transport(_)));
    }

    #[test]
    fn mismatched_field_is_rejected_without_writing() {
        let mut group = sample_group();
        group.d = 7;
        let body = serde_json::to_string(&group).unwrap();
        let endpoint = serve_once(ok_response(&body));
        let dir = tempfile::tempdir().unwrap();
        let dest = dir.path().join("cached.json");
        let err = fetch_and_cache(&endpoint, &[(11, 2)], &dest).unwrap_err();
        assert!(matches!(err, PipelineError::Schema(_)));
        assert!(!dest.exists());
    }

    #[test]
    fn endpoint_env_round_trip() {
        assert!(split_url("http://127.0.0.1:8080/api").is_ok());
        assert!(split_url("https://example.org").is_err());
    }
}
