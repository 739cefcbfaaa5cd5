"""Shared test data: sample titles and synthetic corpus generators."""

from __future__ import annotations

import random

from cbrsearch import Case

# Practical-work style titles used across CLI and retrieval tests.
SAMPLE_TITLES = [
    "Sistem Pendukung Keputusan Promosi dan Evaluasi Kinerja Karyawan",
    "Apliasi Reminder Pembayaran Tagihan Flexi Home",
    "Sistem Navigasi Gedung dengan Metode Algoritma Djikstra",
    "Sistem Administrasi Realisasi Kredit BRIGUNA",
    "Perancangan dan Implementasi Aplikasi Sistem Monitoring",
]

WORDS = [
    "sistem", "aplikasi", "informasi", "data", "metode", "algoritma",
    "analisis", "perancangan", "implementasi", "pengembangan", "website",
    "berbasis", "android", "monitoring", "evaluasi", "kinerja", "karyawan",
    "pendukung", "keputusan", "promosi", "navigasi", "gedung", "kredit",
    "administrasi", "pembayaran", "tagihan", "reminder", "jaringan",
    "keamanan", "digital", "sekolah", "inventaris", "penjualan",
    "pembelian", "toko", "online", "manajemen", "dokumen", "arsip",
    "surat", "penggajian", "absensi", "pegawai", "mahasiswa", "dosen",
    "jadwal", "kuliah", "perpustakaan", "buku", "klasifikasi", "prediksi",
    "deteksi", "pengenalan", "citra", "teks", "suara", "sensor", "cerdas",
    "web", "mobile", "desa", "kantor", "rumah", "sakit", "pasien",
    "obat", "stok", "barang", "laporan", "akademik", "nilai", "ujian",
    "pendaftaran", "antrian", "parkir", "wisata", "kuliner", "peta",
    "lokasi", "cuaca",
]


def generate_titles(rng: random.Random, count: int, min_words: int = 3, max_words: int = 8) -> list[str]:
    """Random plausible-looking titles; capitalization exercises casefolding."""
    titles = []
    for _ in range(count):
        words = [rng.choice(WORDS) for _ in range(rng.randint(min_words, max_words))]
        titles.append(" ".join(word.capitalize() for word in words))
    return titles


def generate_token_corpus(
    rng: random.Random,
    max_docs: int = 200,
    max_tokens: int = 30,
    max_vocab: int = 60,
) -> dict[str, list[str]]:
    """Random corpus as raw token lists, keyed by zero-padded doc id.

    All tokens are plain lowercase alphanumerics, so joining them with
    spaces and re-tokenizing gives back exactly the same lists.
    """
    vocab = [f"kata{i:02d}" for i in range(rng.randint(5, max_vocab))]
    n_docs = rng.randint(2, max_docs)
    return {
        f"d{i:03d}": [rng.choice(vocab) for _ in range(rng.randint(1, max_tokens))]
        for i in range(n_docs)
    }


def corpus_cases(doc_tokens: dict[str, list[str]]) -> list[Case]:
    return [Case(id=doc_id, title=" ".join(tokens)) for doc_id, tokens in doc_tokens.items()]


def random_query_tokens(
    rng: random.Random, doc_tokens: dict[str, list[str]], max_len: int = 6
) -> list[str]:
    """A short query over the corpus vocabulary, sometimes with an unseen word."""
    vocab = sorted({token for tokens in doc_tokens.values() for token in tokens})
    tokens = [rng.choice(vocab) for _ in range(rng.randint(1, max_len))]
    if rng.random() < 0.3:
        tokens.append(f"zzz{rng.randint(0, 9)}")
        rng.shuffle(tokens)
    return tokens
