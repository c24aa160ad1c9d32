//! Run one extraction against a live multimodal endpoint.
//!
//! The backend is vendor-neutral: it POSTs
//! `{"model", "prompt", "image_png_base64"}` to a configured URL with the API
//! key from a configured environment variable, and accepts either a raw text
//! body or `{"text": ...}` back. Point it at your provider's completion
//! endpoint or a thin proxy in front of one.
//!
//! ```bash
//! export CHART_API_KEY=...
//! cargo run --example remote_extraction -- https://your-endpoint/v1/complete your-model
//! ```
//!
//! Without arguments (or without the key set) it prints the request it would
//! send and exits.

use chartgrid::dataset::{build_dataset, render_chart, DatasetConfig};
use chartgrid::extract::{
    build_prompt, run_extraction, Cache, ExtractionRequest, PromptStrategy, RemoteBackend,
    RemoteConfig,
};

const KEY_ENV: &str = "CHART_API_KEY";

fn main() -> chartgrid::Result<()> {
    let mut args = std::env::args().skip(1);
    let endpoint = args.next();
    let model = args.next().unwrap_or_else(|| "default-model".into());

    let charts = build_dataset(&DatasetConfig { count: 4, ..Default::default() }, 1)?;
    let gt = &charts[0];
    let (image, _) = render_chart(gt)?;
    let png = image.to_png_bytes()?;
    let prompt = build_prompt(&PromptStrategy::baseline());

    let (Some(endpoint), Ok(_)) = (endpoint, std::env::var(KEY_ENV)) else {
        println!("dry run: pass an endpoint URL and set {KEY_ENV} to go live.\n");
        println!("would send chart {} ({} PNG bytes) with this prompt:\n", gt.id, png.len());
        println!("{prompt}");
        return Ok(());
    };

    let backend = RemoteBackend::new(RemoteConfig {
        endpoint,
        model,
        api_key_env: KEY_ENV.into(),
        auth_header: "authorization".into(),
        auth_prefix: "Bearer ".into(),
        timeout_secs: 60,
        retry: Default::default(),
    })?;

    let cache = Cache::new("target/example-output/remote-cache")?;
    let record = run_extraction(
        &backend,
        Some(&cache),
        "baseline",
        &ExtractionRequest { chart_id: &gt.id, prompt: &prompt, image_png: &png },
    )?;

    println!("backend: {}", record.backend_id);
    println!("latency: {} ms", record.latency_ms);
    match &record.parsed {
        Some(result) => {
            println!("parsed {} series:", result.series.len());
            for s in &result.series {
                println!("  {:?}: {} points", s.name, s.points.len());
            }
        }
        None => println!("parse failed: {}", record.parse_error.as_deref().unwrap_or("?")),
    }
    println!("record cached; rerunning makes no network call.");
    Ok(())
}
