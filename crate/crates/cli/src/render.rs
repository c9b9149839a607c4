//! Plain-text, JSON and CSV rendering for the report tables. The three modes
//! carry the same cells, so outputs can be diffed against each other.

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum OutputMode {
    Table,
    Json,
    Csv,
}

#[derive(Clone)]
pub enum Cell {
    Str(String),
    Num(u64),
}

impl Cell {
    pub fn s(v: &str) -> Cell {
        Cell::Str(v.to_string())
    }

    pub fn u(v: u64) -> Cell {
        Cell::Num(v)
    }

    fn text(&self) -> String {
        match self {
            Cell::Str(s) => s.clone(),
            Cell::Num(n) => n.to_string(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Str(s) => serde_json::Value::String(s.clone()),
            Cell::Num(n) => serde_json::Value::from(*n),
        }
    }
}

pub struct Table {
    name: String,
    header: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Table {
        Table {
            name: name.to_string(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    pub fn print(&self, mode: OutputMode) {
        match mode {
            OutputMode::Table => self.print_text(),
            OutputMode::Json => self.print_json(),
            OutputMode::Csv => self.print_csv(),
        }
    }

    fn print_text(&self) {
        let mut widths: Vec<usize> = self.header.iter().map(String::len).collect();
        for row in &self.rows {
            for (i, c) in row.iter().enumerate() {
                widths[i] = widths[i].max(c.text().len());
            }
        }
        let line = |cells: &[String]| {
            let padded: Vec<String> = cells
                .iter()
                .enumerate()
                .map(|(i, c)| format!("{:width$}", c, width = widths[i]))
                .collect();
            println!("{}", padded.join("  ").trim_end());
        };
        line(&self.header);
        let total: usize = widths.iter().sum::<usize>() + 2 * (widths.len() - 1);
        println!("{}", "-".repeat(total));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::text).collect();
            line(&cells);
        }
    }

    fn print_json(&self) {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: serde_json::Map<String, serde_json::Value> = self
                    .header
                    .iter()
                    .cloned()
                    .zip(row.iter().map(Cell::json))
                    .collect();
                serde_json::Value::Object(obj)
            })
            .collect();
        let doc = serde_json::json!({ &self.name: rows });
        println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    }

    fn print_csv(&self) {
        let escape = |s: &str| {
            if s.contains(',') || s.contains('"') {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s.to_string()
            }
        };
        println!("{}", self.header.iter().map(|h| escape(h)).collect::<Vec<_>>().join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| escape(&c.text())).collect();
            println!("{}", cells.join(","));
        }
    }
}
