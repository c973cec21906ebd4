package test.suite;

public class LCOMCase {
    private int hits;

    public int count() {
        hits++;
        return hits;
    }
}
