package test.noh;

public class ClassE extends ClassD {
    public void touch() {
    }
}
